"""Experiment configs, convergence sweeps and the ``lab`` command line."""

from .config import ConfigError, ExperimentConfig, list_presets, load_config
from .errors import errors, h1_error, l2_error
from .runner import (
    UNSTABLE,
    ConditionResult,
    ConvergenceRow,
    ConvergenceTable,
    RunResult,
    condition_study,
    geometric_mean_table,
    pairwise_orders,
    run,
    spectrum,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "list_presets",
    "load_config",
    "errors",
    "h1_error",
    "l2_error",
    "UNSTABLE",
    "ConditionResult",
    "ConvergenceRow",
    "ConvergenceTable",
    "RunResult",
    "condition_study",
    "geometric_mean_table",
    "pairwise_orders",
    "run",
    "spectrum",
]
