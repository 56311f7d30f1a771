"""Penalized least squares shrinking toward simple-regression slopes.

The estimator ``(X'X + kI)^{-1}(X'y + k h alpha)`` contains OLS (``k = 0``)
and ridge (``h = 0``) as special cases. The package bundles diagnostics,
k-selection rules, bootstrap inference, perturbation stability and a Monte
Carlo harness around it.
"""

__version__ = "0.1.0"

from .data import Dataset, TransformMode, load_dataset, load_us_credit, transform_columns
from .diagnostics import (
    DiagnosticsReport,
    coefficient_of_variation,
    condition_number_extended,
    full_report,
    vif_extended,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DataError,
    DegenerateColumnError,
    NotPositiveDefiniteError,
    ShrinkRegError,
)
from .estimation import (
    AugmentedModel,
    FitResult,
    PenaltyConfig,
    Spectral,
    alpha_alpr,
    augment,
    compute_alpha,
    fit_penalized,
    fit_penalized_two_k,
    gof,
    ols_sigma2,
    variance_covariance,
)
from .grid import parse_grid
from .inference import bootstrap
from .numerics import correlation_det, eig_sym, solve_spd
from .risk import GridMinimum, MseBreakdown, minimize_mse_grid, mse, mse_asymptote
from .selection import alpha_distance, select_k, weights_from_k
from .simulation import generate_design, run_simulation
from .stability import perturb_vector, stability_analysis
from .tracegrid import TraceGrid, compute_trace

__all__ = [
    "AugmentedModel",
    "ConfigError",
    "ConvergenceError",
    "DataError",
    "Dataset",
    "DegenerateColumnError",
    "DiagnosticsReport",
    "FitResult",
    "GridMinimum",
    "MseBreakdown",
    "NotPositiveDefiniteError",
    "PenaltyConfig",
    "ShrinkRegError",
    "Spectral",
    "TraceGrid",
    "TransformMode",
    "alpha_alpr",
    "alpha_distance",
    "augment",
    "bootstrap",
    "coefficient_of_variation",
    "compute_alpha",
    "compute_trace",
    "condition_number_extended",
    "correlation_det",
    "eig_sym",
    "fit_penalized",
    "fit_penalized_two_k",
    "full_report",
    "generate_design",
    "gof",
    "load_dataset",
    "load_us_credit",
    "minimize_mse_grid",
    "mse",
    "mse_asymptote",
    "ols_sigma2",
    "parse_grid",
    "perturb_vector",
    "run_simulation",
    "select_k",
    "solve_spd",
    "stability_analysis",
    "transform_columns",
    "variance_covariance",
    "vif_extended",
    "weights_from_k",
]
