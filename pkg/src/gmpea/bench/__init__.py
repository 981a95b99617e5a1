from .config import AlgorithmSpec, ConfigError, ExperimentConfig
from .experiment import aggregate, emit_plotdata, rank_diagnostic, rank_study, run_experiment, scaling_study

__all__ = [
    "AlgorithmSpec",
    "ConfigError",
    "ExperimentConfig",
    "aggregate",
    "emit_plotdata",
    "rank_diagnostic",
    "rank_study",
    "run_experiment",
    "scaling_study",
]
