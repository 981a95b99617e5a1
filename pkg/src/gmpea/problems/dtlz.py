"""Constrained DTLZ variants: C1-DTLZ1, C1-DTLZ3, C2-DTLZ2, C3-DTLZ4 and DC1/2/3 over DTLZ1/3."""

from __future__ import annotations

import math

import numpy as np

from ..batch import rowsum
from .base import Problem

# numpy's vectorized pow can differ from the C library by an ulp; going
# through math.pow keeps batched rows identical to one-row evaluation
_libm_pow = np.frompyfunc(math.pow, 2, 1)

DC_PARAMS = {"DC1": (5.0, 0.95), "DC2": (3.0, 0.9), "DC3": (5.0, 0.5)}


def dtlz_g(core: str, XM: np.ndarray) -> np.ndarray:
    k = XM.shape[1]
    if core in ("DTLZ1", "DTLZ3"):
        return 100 * (k + rowsum((XM - 0.5) ** 2 - np.cos(20 * np.pi * (XM - 0.5))))
    return rowsum((XM - 0.5) ** 2)


def linear_objectives(Xp: np.ndarray, g: np.ndarray) -> np.ndarray:
    """DTLZ1 mapping: a simplex scaled by 0.5 * (1 + g)."""
    m = Xp.shape[1] + 1
    cols = []
    for i in range(m):
        f = 0.5 * (1 + g)
        for j in range(m - 1 - i):
            f = f * Xp[:, j]
        if i > 0:
            f = f * (1 - Xp[:, m - 1 - i])
        cols.append(f)
    return np.column_stack(cols)


def spherical_objectives(Xp: np.ndarray, g: np.ndarray, alpha: float = 1.0) -> np.ndarray:
    """DTLZ2/3/4 mapping onto the positive orthant of a sphere of radius 1 + g."""
    m = Xp.shape[1] + 1
    if alpha != 1.0:
        Xp = _libm_pow(Xp, alpha).astype(float)
    cols = []
    for i in range(m):
        f = 1 + g
        for j in range(m - 1 - i):
            f = f * np.cos(Xp[:, j] * np.pi / 2)
        if i > 0:
            f = f * np.sin(Xp[:, m - 1 - i] * np.pi / 2)
        cols.append(f)
    return np.column_stack(cols)


class ConstrainedDTLZ(Problem):
    """A DTLZ core plus one of the C- or DC- constraint families.

    ``family`` is one of C1, C2, C3, DC1, DC2, DC3. For the DC families
    ``dc_params`` overrides the (frequency, offset) pair.
    """

    def __init__(self, family: str, core: str, d: int | None = None, m: int = 3, dc_params=None):
        if d is None:
            d = 7 if core == "DTLZ1" else 12
        if d < m:
            raise ValueError("DTLZ problems need d >= m")
        if m < 2:
            raise ValueError("need at least two objectives")
        self.family = family
        self.core = core
        n_ineq = {"C1": 1, "C2": 1, "C3": m, "DC1": 1, "DC2": 2, "DC3": m}[family]
        super().__init__(f"{family}-{core}", d, m, n_ineq)
        if family in DC_PARAMS:
            self.dc_a, self.dc_b = dc_params if dc_params is not None else DC_PARAMS[family]
        if family == "C1" and core == "DTLZ3":
            self.radius = 9.0 if m < 5 else (12.5 if m <= 12 else 15.0)
        if family == "C2":
            self.radius = 0.2 if m == 2 else (0.4 if m == 3 else 0.5)

    def split(self, X):
        return X[:, : self.m - 1], X[:, self.m - 1 :]

    def _evaluate(self, X):
        Xp, XM = self.split(X)
        g = dtlz_g(self.core, XM)
        if self.core == "DTLZ1":
            F = linear_objectives(Xp, g)
        else:
            F = spherical_objectives(Xp, g, 100.0 if self.core == "DTLZ4" else 1.0)
        if self.family.startswith("C"):
            return F, self.objective_constraints(F)
        a, b = self.dc_a, self.dc_b
        if self.family == "DC1":
            G = (b - np.cos(a * np.pi * X[:, 0]))[:, None]
        elif self.family == "DC2":
            G = np.column_stack([b - np.cos(g / 100 * np.pi * a), b - np.exp(-g / 100)])
        else:
            G = np.column_stack([b - np.cos(a * np.pi * g)] + [b - np.cos(a * np.pi * Xp[:, j]) for j in range(self.m - 1)])
        return F, G

    def objective_constraints(self, F):
        if not self.family.startswith("C"):
            return None
        F = np.asarray(F, dtype=float)
        m = self.m
        if self.family == "C1" and self.core == "DTLZ1":
            return -(1 - F[:, -1] / 0.6 - rowsum(F[:, :-1] / 0.5))[:, None]
        sq = F * F
        if self.family == "C1":
            s = rowsum(sq)
            return -((s - 16) * (s - self.radius * self.radius))[:, None]
        if self.family == "C2":
            r2 = self.radius * self.radius
            per_axis = []
            for i in range(m):
                rest = [sq[:, j] for j in range(m) if j != i]
                acc = (F[:, i] - 1) ** 2
                for col in rest:
                    acc = acc + col
                per_axis.append(acc - r2)
            v1 = per_axis[0]
            for col in per_axis[1:]:
                v1 = np.minimum(v1, col)
            v2 = rowsum((F - 1 / np.sqrt(m)) ** 2) - r2
            return np.minimum(v1, v2)[:, None]
        # C3 on a spherical core
        cols = []
        for j in range(m):
            acc = sq[:, j] / 4
            for i in range(m):
                if i != j:
                    acc = acc + sq[:, i]
            cols.append(-(acc - 1))
        return np.column_stack(cols)


SUITE = {
    "C1-DTLZ1": ("C1", "DTLZ1"),
    "C1-DTLZ3": ("C1", "DTLZ3"),
    "C2-DTLZ2": ("C2", "DTLZ2"),
    "C3-DTLZ4": ("C3", "DTLZ4"),
    "DC1-DTLZ1": ("DC1", "DTLZ1"),
    "DC1-DTLZ3": ("DC1", "DTLZ3"),
    "DC2-DTLZ1": ("DC2", "DTLZ1"),
    "DC2-DTLZ3": ("DC2", "DTLZ3"),
    "DC3-DTLZ1": ("DC3", "DTLZ1"),
    "DC3-DTLZ3": ("DC3", "DTLZ3"),
}


def make_dtlz(name: str, d: int | None = None, m: int = 3) -> ConstrainedDTLZ:
    family, core = SUITE[name]
    return ConstrainedDTLZ(family, core, d=d, m=m)
