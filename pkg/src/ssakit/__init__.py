"""Singular spectrum analysis toolkit.

Decomposes one-dimensional series into interpretable components and builds
on the decomposition: forecasting, gap filling, parameter estimation,
structured low-rank approximation and red-noise signal detection, all
driven by an FFT-based trajectory-matrix engine that never materialises the
dense matrix.
"""

from .decomposition import SSA, toeplitz_covariance
from .detect import Ar1Model, McssaReport, fit_ar1, mcssa_test, simulate_ar1
from .exceptions import (
    GapStructureError,
    GroupingOverlapError,
    MissingValueError,
    NonForecastableError,
    SvdConvergenceError,
    WindowLengthError,
)
from .forecast import (
    ForecastResult,
    SSAForecaster,
    bootstrap_forecast,
    forecast_recurrent,
    forecast_vector,
)
from .gapfill import (
    GapFillResult,
    IterativeGapFiller,
    SubspaceGapFiller,
    fill_iterative,
    fill_subspace,
)
from .grouping import (
    ReconstructionFilter,
    cluster_components,
    eigenvector_periodogram,
    last_point_weights,
    midpoint_filter,
    normalize_grouping,
    periodic_pairs,
    trend_indices,
)
from .hankel import (
    CenteredHankelOperator,
    HankelOperator,
    antidiagonal_weights,
    diagonal_average,
    triples_to_series,
)
from .lowrank import (
    CadzowFilter,
    CadzowResult,
    RankSelection,
    cadzow,
    extract_signal,
    select_rank,
)
from .model import (
    LinearRecurrence,
    SignalModel,
    SinusoidTerm,
    characteristic_roots,
    esprit_roots,
    estimate_amplitudes,
    min_norm_lrr,
    roots_to_terms,
)
from .svd import truncated_svd

__version__ = "0.1.0"

__all__ = [
    "SSA",
    "toeplitz_covariance",
    "Ar1Model",
    "McssaReport",
    "fit_ar1",
    "mcssa_test",
    "simulate_ar1",
    "GapStructureError",
    "GroupingOverlapError",
    "MissingValueError",
    "NonForecastableError",
    "SvdConvergenceError",
    "WindowLengthError",
    "ForecastResult",
    "SSAForecaster",
    "bootstrap_forecast",
    "forecast_recurrent",
    "forecast_vector",
    "GapFillResult",
    "IterativeGapFiller",
    "SubspaceGapFiller",
    "fill_iterative",
    "fill_subspace",
    "ReconstructionFilter",
    "cluster_components",
    "eigenvector_periodogram",
    "last_point_weights",
    "midpoint_filter",
    "normalize_grouping",
    "periodic_pairs",
    "trend_indices",
    "CenteredHankelOperator",
    "HankelOperator",
    "antidiagonal_weights",
    "diagonal_average",
    "triples_to_series",
    "CadzowFilter",
    "CadzowResult",
    "RankSelection",
    "cadzow",
    "extract_signal",
    "select_rank",
    "LinearRecurrence",
    "SignalModel",
    "SinusoidTerm",
    "characteristic_roots",
    "esprit_roots",
    "estimate_amplitudes",
    "min_norm_lrr",
    "roots_to_terms",
    "truncated_svd",
]
