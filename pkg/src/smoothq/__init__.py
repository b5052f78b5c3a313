"""Smoothed quantile estimators q̂(z, h) bridging sample quantiles and the sample mean."""
from .asymptotics import (
    HStarRegime,
    LineCoefficients,
    Regime,
    VarianceReport,
    asym_variance,
    classify_hstar,
    influence_plugin,
    influence_smoothed,
    knight_gap,
    limit_plugin_variance,
    line_coefficients,
    line_variance,
    mean_family_variance,
    plugin_variance,
    score_variance,
)
from .distributions import Empirical, Laplace, Normal, Sample, make_rng, norm_ppf, parse_model
from .errors import (
    DataError,
    DegenerateSampleError,
    EmptySampleError,
    InsufficientDataError,
    NoRootError,
    OutOfRangeError,
    SmoothQError,
    UnsupportedOperation,
)
from .estimators import (
    EstimatorOutput,
    HPath,
    empirical_score,
    h_path,
    loss,
    mean_estimator,
    mean_family_z,
    objective,
    plugin_estimator,
    plugin_z,
    sample_quantile,
    solve_empirical,
    solve_empirical_at,
)
from .population import PopulationSolution, SmoothParams, dq_dh, dq_dz, line_z, solve_population, zm

__version__ = "0.1.0"
