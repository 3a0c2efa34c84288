"""O-information rate and related Gaussian interaction measures."""

from ._core import (  # noqa: F401
    BlockPartition,
    FrequencyGrid,
    OirError,
    TimeSeriesData,
    VarModel,
    build_sim1,
    build_sim2,
    fir_design,
    ar2_coeffs,
    fit_var,
    integrate,
    interaction_info_check,
    load_csv,
    mir,
    mir_oracle,
    oir,
    oir_increment,
    oir_scan,
    realize,
    reduce,
    select_order,
    spectral_radius,
    var_to_ss,
)

__version__ = "0.1.0"
