"""Monte Carlo engine, numerical-study drivers and returns ingestion."""
from .drivers import (
    DEFAULTS,
    default_config,
    experiment1,
    experiment2,
    experiment2_finite,
    experiment3,
    experiment_monotonicity,
    experiment_realdata,
    run_experiment,
)
from .engine import MonteCarloConfig, replicate, summarize, variance_se
from .results import ExperimentResult, Row
from .returns import BUNDLED_PRICES, ReturnsSeries, load_returns

EXPERIMENTS = tuple(DEFAULTS)

__all__ = [
    "BUNDLED_PRICES",
    "DEFAULTS",
    "EXPERIMENTS",
    "ExperimentResult",
    "MonteCarloConfig",
    "ReturnsSeries",
    "Row",
    "default_config",
    "experiment1",
    "experiment2",
    "experiment2_finite",
    "experiment3",
    "experiment_monotonicity",
    "experiment_realdata",
    "load_returns",
    "replicate",
    "run_experiment",
    "summarize",
    "variance_se",
]
