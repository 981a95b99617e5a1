"""Batched dual-population decomposition for constrained multiobjective optimization."""

from .algorithm import environmental_selection, reference_vectors, run
from .population import Population
from .problems import get_problem, problem_names
from .runner import RunConfig, RunError, RunResult

__all__ = [
    "Population",
    "RunConfig",
    "RunError",
    "RunResult",
    "environmental_selection",
    "get_problem",
    "problem_names",
    "reference_vectors",
    "run",
]
