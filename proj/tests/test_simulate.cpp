#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oir/interaction.h"
#include "oir/simulate.h"
#include "oracles.h"

using namespace oir;

namespace {

// scipy.signal.firwin(21, 0.2, fs=1) and its pass_zero=False counterpart,
// first 11 taps (the rest mirror them).
const double kLowpassRef[11] = {
    -1.2499529374659835e-18, -0.0034552528812046013, -0.0039335848491553003, 0.0072211043735973179,
    0.020114518991525575,    -8.4371823278953828e-18, -0.051731808303021348, -0.050643023710857341,
    0.085504061477255408,    0.29651707123039739,     0.40081382734292592};
const double kHighpassRef[11] = {
    -1.8738160513996312e-18, 0.0034532011120203799, 0.0039312490409078183, -0.0072168163981757632,
    -0.020102574757155128,   2.9512602809544167e-17, 0.05170108935602389,   0.050612951296762534,
    -0.085453288175127692,   -0.29634099595884289,   0.60086372917423059};

}  // namespace

TEST_CASE("ar2 coefficients") {
  const auto [a1, a2] = ar2_coeffs({0.9, 10.0, 100.0});
  CHECK(a1 == doctest::Approx(1.8 * std::cos(0.2 * std::numbers::pi)).epsilon(1e-15));
  CHECK(a2 == doctest::Approx(-0.81).epsilon(1e-15));

  const auto [b1, b2] = ar2_coeffs({0.85, 0.1, 1.0});
  const auto [r1, r2] = oracle::ar2_roots(b1, b2);
  for (auto r : {r1, r2}) {
    CHECK(std::abs(r) == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(std::abs(std::arg(r)) == doctest::Approx(0.2 * std::numbers::pi).epsilon(1e-12));
  }
}

TEST_CASE("composed poles") {
  const PolePair p1{0.85, 0.1, 1.0}, p2{0.85, 0.35, 1.0};
  const auto single = compose_poles({p1});
  const auto [a1, a2] = ar2_coeffs(p1);
  REQUIRE(single.size() == 2);
  CHECK(single[0] == doctest::Approx(a1));
  CHECK(single[1] == doctest::Approx(a2));

  const auto four = compose_poles({p1, p2});
  REQUIRE(four.size() == 4);
  for (const auto& p : {p1, p2}) {
    const auto z = std::polar(p.rho, 2.0 * std::numbers::pi * p.f_hz / p.fs);
    CHECK(std::abs(oracle::ar_polynomial(four, z)) < 1e-12);
    CHECK(std::abs(oracle::ar_polynomial(four, std::conj(z))) < 1e-12);
  }

  // Doubled pair: polynomial and its derivative vanish at the pole.
  const auto twice = compose_poles({p1, p1});
  const auto z = std::polar(0.85, 0.2 * std::numbers::pi);
  const double h = 1e-5;
  CHECK(std::abs(oracle::ar_polynomial(twice, z)) < 1e-12);
  CHECK(std::abs((oracle::ar_polynomial(twice, z + h) - oracle::ar_polynomial(twice, z - h)) / (2 * h)) < 1e-6);
}

TEST_CASE("FIR design matches reference taps") {
  const auto lp = fir_design({20, 0.2, FirKind::kLowpass, 1.0});
  const auto hp = fir_design({20, 0.2, FirKind::kHighpass, 1.0});
  REQUIRE(lp.size() == 21);
  REQUIRE(hp.size() == 21);
  for (int k = 0; k < 11; ++k) {
    CHECK(lp[k] == doctest::Approx(kLowpassRef[k]).epsilon(1e-12).scale(1e-3));
    CHECK(hp[k] == doctest::Approx(kHighpassRef[k]).epsilon(1e-12).scale(1e-3));
  }
  for (int k = 0; k < 21; ++k) {
    CHECK(lp[k] == lp[20 - k]);
    CHECK(hp[k] == hp[20 - k]);
  }
}

TEST_CASE("FIR responses") {
  const auto lp = fir_design({20, 0.2, FirKind::kLowpass, 1.0});
  const auto hp = fir_design({20, 0.2, FirKind::kHighpass, 1.0});
  CHECK(std::accumulate(lp.begin(), lp.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fir_magnitude(lp, 0.1, 1.0) > 0.9);
  CHECK(fir_magnitude(lp, 0.35, 1.0) < 0.1);
  CHECK(fir_magnitude(hp, 0.35, 1.0) > 0.9);
  CHECK(fir_magnitude(hp, 0.1, 1.0) < 0.1);
  CHECK(fir_magnitude(hp, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(fir_design({21, 0.2, FirKind::kHighpass, 1.0}), Error);
}

TEST_CASE("Simulation 1 structure") {
  const auto b = build_sim1();
  const auto& m = b.model;
  CHECK(m.q == 3);
  CHECK(m.p == 21);
  CHECK(m.fs == 1.0);
  CHECK(spectral_radius(m) < 1.0);
  CHECK(m.sigma_u == Mat(Vec((Vec(3) << 2.0, 0.5, 2.0).finished()).asDiagonal()));
  const auto hp = fir_design({20, 0.2, FirKind::kHighpass, 1.0});
  const auto lp = fir_design({20, 0.2, FirKind::kLowpass, 1.0});
  for (int k = 0; k < 21; ++k) {
    CHECK(m.coeffs[k](1, 0) == doctest::Approx(0.4 * hp[k]));
    CHECK(m.coeffs[k](2, 0) == doctest::Approx(0.6 * lp[k]));
    CHECK(m.coeffs[k](0, 1) == 0.0);
    CHECK(m.coeffs[k](0, 2) == 0.0);
    CHECK(m.coeffs[k](1, 2) == 0.0);
    CHECK(m.coeffs[k](2, 1) == (k == 0 ? 1.0 : 0.0));
  }
  const auto x1 = compose_poles({{0.85, 0.1, 1.0}, {0.85, 0.35, 1.0}});
  for (int k = 0; k < 4; ++k) CHECK(m.coeffs[k](0, 0) == doctest::Approx(x1[k]));
  CHECK(b.partition.size() == 3);

  const auto swapped = build_sim1({true}).model;
  CHECK(swapped.coeffs[3](1, 0) == doctest::Approx(0.4 * lp[3]));
  CHECK(swapped.coeffs[3](2, 0) == doctest::Approx(0.6 * hp[3]));
}

TEST_CASE("Simulation 1 has no causal flow into X1") {
  const auto ss = var_to_ss(build_sim1().model);
  const auto grid = FrequencyGrid::uniform(1.0);
  for (int src : {1, 2}) {
    const auto r = mir(ss, {0}, {src}, grid);
    double worst = 0.0;
    for (double v : r.profiles->te_2to1.values) worst = std::max(worst, std::abs(v));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("Simulation 2 structure") {
  const auto b = build_sim2();
  const auto& m = b.model;
  CHECK(m.q == 10);
  CHECK(m.p == 2);
  CHECK(m.fs == 100.0);
  CHECK(m.sigma_u == Mat::Identity(10, 10));
  const double r = spectral_radius(m);
  CHECK(r > 0.0);
  CHECK(r < 1.0);
  REQUIRE(b.partition.size() == 5);
  CHECK(b.partition.blocks[0] == IndexSet{0, 1, 2, 3});
  CHECK(b.partition.blocks[1] == IndexSet{4});
  CHECK(b.partition.blocks[2] == IndexSet{5, 6});
  CHECK(b.partition.blocks[3] == IndexSet{7});
  CHECK(b.partition.blocks[4] == IndexSet{8, 9});
}

TEST_CASE("Simulation 2 Y8 oscillates near 25 Hz and X2, X3 barely interact") {
  const auto m = build_sim2().model;
  const auto grid = FrequencyGrid::uniform(100.0);
  // Y8 inherits the 10 Hz rhythm through its inputs; its own resonance is
  // the highest point above 15 Hz.
  int best = -1;
  double peak = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    if (grid.freqs_hz[i] < 15.0) continue;
    const double s = oracle::var_spectrum(m, grid.omega(i))(7, 7).real();
    if (s > peak) {
      peak = s;
      best = i;
    }
  }
  REQUIRE(best > 0);
  CHECK(std::abs(grid.freqs_hz[best] - 25.0) < 2.0);
  CHECK(grid.freqs_hz[best] < 40.0);
  const auto ss = var_to_ss(m);
  CHECK(std::abs(mir_oracle(ss, {4}, {5, 6}).total) < 1e-3);
}

TEST_CASE("realizations") {
  VarModel white;
  white.q = 2;
  white.p = 1;
  white.coeffs = {Mat::Zero(2, 2)};
  white.sigma_u = Mat::Identity(2, 2);
  const auto w = realize(white, 100000, 9);
  const Mat centered = w.samples.rowwise() - w.samples.colwise().mean();
  const Mat cov = centered.transpose() * centered / (w.length() - 1);
  CHECK((cov - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.02);

  VarModel ar;
  ar.q = 1;
  ar.p = 1;
  ar.coeffs = {Mat::Constant(1, 1, 0.5)};
  ar.sigma_u = Mat::Identity(1, 1);
  const auto x = realize(ar, 100000, 10);
  const Vec c = x.samples.col(0).array() - x.samples.col(0).mean();
  const double lag1 = c.head(c.size() - 1).dot(c.tail(c.size() - 1)) / c.dot(c);
  CHECK(std::abs(lag1 - 0.5) < 0.01);

  const auto a = realize(build_sim2().model, 500, 77);
  const auto b = realize(build_sim2().model, 500, 77);
  const auto c2 = realize(build_sim2().model, 500, 78);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != c2.samples);
  CHECK(a.length() == 500);
  CHECK(a.channel_names.front() == "Y1");
  CHECK(a.fs == 100.0);
}
