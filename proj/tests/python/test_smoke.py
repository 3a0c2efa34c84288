import math

import numpy as np
import pytest

import oir


def test_sim1_pair_matches_oracle():
    model, part = oir.build_sim1()
    ss = oir.var_to_ss(model)
    grid = oir.FrequencyGrid(1.0)
    spectral = oir.mir(ss, [0], [2], grid)
    oracle = oir.mir_oracle(ss, [0], [2])
    assert spectral.total == pytest.approx(oracle.total, rel=1e-6)
    assert abs(spectral.te_2to1) < 1e-8
    assert len(spectral.profiles["total"].values) == 1025


def test_unidirectional_closed_form():
    m = oir.VarModel()
    m.q, m.p, m.fs = 2, 1, 1.0
    m.coeffs = [np.array([[0.0, 0.0], [0.5, 0.0]])]
    m.sigma_u = np.eye(2)
    red = oir.reduce(oir.var_to_ss(m), [1])
    assert red.v_t[0, 0] == pytest.approx(1.25, abs=1e-8)
    r = oir.mir_oracle(oir.var_to_ss(m), [0], [1])
    assert r.te_1to2 == pytest.approx(0.5 * math.log(1.25), abs=1e-10)


def test_sim2_scan_and_bands():
    model, part = oir.build_sim2()
    assert len(part) == 5
    ss = oir.var_to_ss(model)
    grid = oir.FrequencyGrid(100.0, 257)
    results = oir.oir_scan(ss, part, [3, 4, 5], grid, {"alpha": (8.0, 12.0)})
    assert len(results) == 16
    full = results[-1]
    assert full.multiplet == [0, 1, 2, 3, 4]
    assert dict(full.band_table)["alpha"] < 0
    assert oir.integrate(full.nu) == pytest.approx(full.omega, abs=1e-12)
    trip = oir.oir(ss, part, [0, 3, 4], grid)
    assert trip.omega > 0
    assert trip.omega == pytest.approx(oir.interaction_info_check(ss, part, [0, 3, 4], grid), abs=1e-8)


def test_fit_roundtrip_and_errors():
    model, _ = oir.build_sim2()
    data = oir.realize(model, 20000, 5)
    assert data.samples.shape == (20000, 10)
    assert oir.select_order(data, 4, "bic") == 2
    fit = oir.fit_var(data, 2)
    assert oir.spectral_radius(fit) < 1
    back = oir.VarModel.from_json(fit.to_json())
    assert np.array_equal(back.sigma_u, fit.sigma_u)
    with pytest.raises(oir.OirError, match="multiplet_too_small"):
        oir.oir(oir.var_to_ss(model), oir.BlockPartition([[0], [1]]), [0, 1], oir.FrequencyGrid(100.0, 33))


def test_fir_design():
    taps = oir.fir_design(20, 0.2, "lowpass")
    assert len(taps) == 21
    assert sum(taps) == pytest.approx(1.0, abs=1e-10)
    a1, a2 = oir.ar2_coeffs(0.9, 10.0, 100.0)
    assert a2 == pytest.approx(-0.81)
