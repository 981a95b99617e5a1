from __future__ import annotations

import numpy as np

from ..scalarize import ConstraintSpec


class Problem:
    """A box-bounded constrained multiobjective problem.

    Subclasses implement ``_evaluate(X) -> (F, G)`` with ``G <= 0`` meaning
    satisfied. Problems whose constraints depend on objective values only
    also implement ``objective_constraints(F)``; reference-front generation
    relies on it.
    """

    encoding = "continuous"

    def __init__(self, name: str, d: int, m: int, n_ineq: int, n_eq: int = 0, lower=0.0, upper=1.0):
        self.name = name
        self.d = int(d)
        self.m = int(m)
        self.n_ineq = int(n_ineq)
        self.n_eq = int(n_eq)
        self.lower = np.broadcast_to(np.asarray(lower, dtype=float), (self.d,)).copy()
        self.upper = np.broadcast_to(np.asarray(upper, dtype=float), (self.d,)).copy()
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("bounds must be finite")
        if np.any(self.lower >= self.upper):
            raise ValueError("every lower bound must be below its upper bound")
        self.lower.setflags(write=False)
        self.upper.setflags(write=False)

    @property
    def n_constraints(self) -> int:
        return self.n_ineq + self.n_eq

    def constraint_spec(self, delta: float | None = None) -> ConstraintSpec:
        if delta is None:
            return ConstraintSpec(self.n_ineq, self.n_eq)
        return ConstraintSpec(self.n_ineq, self.n_eq, delta)

    def evaluate(self, X) -> tuple[np.ndarray, np.ndarray]:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.d:
            raise ValueError(f"{self.name}: expected an N x {self.d} matrix, got {X.shape}")
        bad = np.flatnonzero(np.any((X < self.lower) | (X > self.upper) | ~np.isfinite(X), axis=1))
        if bad.size:
            shown = ", ".join(str(i) for i in bad[:20])
            more = "" if bad.size <= 20 else f" (+{bad.size - 20} more)"
            raise ValueError(f"{self.name}: rows out of bounds: {shown}{more}")
        F, G = self._evaluate(X)
        return F, G.reshape(X.shape[0], self.n_constraints)

    def _evaluate(self, X):  # pragma: no cover - abstract
        raise NotImplementedError

    def objective_constraints(self, F):
        """Constraint values computed from objectives alone, or None if unsupported."""
        return None

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name!r}, d={self.d}, m={self.m})"


def evaluate(problem: Problem, X) -> tuple[np.ndarray, np.ndarray]:
    return problem.evaluate(X)
