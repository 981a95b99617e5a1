from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problems.base import Problem
from .scalarize import ConstraintSpec, cv_batch


@dataclass
class Population:
    """Decision vectors with their objectives, raw constraints and cached CV."""

    X: np.ndarray
    F: np.ndarray
    C: np.ndarray
    cv: np.ndarray

    def __post_init__(self):
        n = self.X.shape[0]
        if not (self.F.shape[0] == self.C.shape[0] == self.cv.shape[0] == n):
            raise ValueError("X, F, C and cv must have the same number of rows")

    def __len__(self) -> int:
        return self.X.shape[0]

    @classmethod
    def evaluate(cls, problem: Problem, X, spec: ConstraintSpec | None = None, dtype=np.float64) -> "Population":
        X = np.asarray(X, dtype=float)
        F, C = problem.evaluate(X)
        cv = cv_batch(C, spec or problem.constraint_spec())
        pop = cls(X, F, C, cv)
        return pop if dtype == np.float64 else pop.astype(dtype)

    def astype(self, dtype) -> "Population":
        """Round stored matrices to ``dtype`` (the 32-bit precision mode)."""
        X, F, C = (np.asarray(a, dtype=dtype).astype(np.float64) for a in (self.X, self.F, self.C))
        cv = np.asarray(self.cv, dtype=dtype).astype(np.float64)
        return Population(X, F, C, cv)

    def take(self, idx) -> "Population":
        return Population(self.X[idx], self.F[idx], self.C[idx], self.cv[idx])

    def concat(self, *others: "Population") -> "Population":
        pops = (self,) + others
        return Population(*(np.concatenate([getattr(p, k) for p in pops]) for k in ("X", "F", "C", "cv")))

    def feasible_ratio(self) -> float:
        return float(np.mean(self.cv == 0)) if len(self) else 0.0

    def equals(self, other: "Population") -> bool:
        return all(np.array_equal(getattr(self, k), getattr(other, k)) for k in ("X", "F", "C", "cv"))
