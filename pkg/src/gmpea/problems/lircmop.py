"""LIRCMOP1-14: large-infeasible-region constrained problems.

Bounds are [0, 1]^d. Sums run left to right over the variable index so that
row-wise scalar evaluation reproduces these results exactly.
"""

from __future__ import annotations

import numpy as np

from ..batch import rowsum
from .base import Problem

_SHIFT = 0.7057
_SCALE = 1.7057
_ROT = -0.25 * np.pi  # ellipse orientation
_WAVE = 0.25 * np.pi  # wave-band orientation
_RADIUS = 0.1

# (p, q, a, b) per ellipse; the curve is either "sqrt" (1 - sqrt x) or "square" (1 - x^2)
_ELLIPSES = {
    5: ("sqrt", [(1.6, 1.6, 2.0, 4.0), (2.5, 2.5, 2.0, 8.0)]),
    6: ("square", [(1.8, 1.8, 2.0, 8.0), (2.8, 2.8, 2.0, 8.0)]),
    7: ("sqrt", [(1.2, 1.2, 2.0, 6.0), (2.25, 2.25, 2.5, 12.0), (3.5, 3.5, 2.5, 10.0)]),
    8: ("square", [(1.2, 1.2, 2.0, 6.0), (2.25, 2.25, 2.5, 12.0), (3.5, 3.5, 2.5, 10.0)]),
}
# curve, ellipse (p, q, a, b), wave offset
_WAVED = {
    9: ("square", (1.4, 1.4, 1.5, 6.0), 2.0),
    10: ("sqrt", (1.1, 1.2, 2.0, 4.0), 1.0),
    11: ("sqrt", (1.2, 1.2, 1.5, 5.0), 2.1),
    12: ("square", (1.6, 1.6, 1.5, 6.0), 2.5),
}


def _curve(kind: str, x1):
    return 1 - np.sqrt(x1) if kind == "sqrt" else 1 - x1 * x1


def _ellipse(f1, f2, p, q, a, b):
    u = (f1 - p) * np.cos(_ROT) - (f2 - q) * np.sin(_ROT)
    v = (f1 - p) * np.sin(_ROT) + (f2 - q) * np.cos(_ROT)
    return -(u * u / (a * a) + v * v / (b * b) - _RADIUS)


def _wave(f1, f2, c):
    return -(
        f1 * np.sin(_WAVE) + f2 * np.cos(_WAVE) - np.sin(4 * np.pi * (f1 * np.cos(_WAVE) - f2 * np.sin(_WAVE))) - c
    )


class _LIRCMOPBase(Problem):
    def __init__(self, index: int, d: int, m: int, n_ineq: int):
        if d < 3:
            raise ValueError("LIRCMOP needs at least 3 decision variables")
        super().__init__(f"LIRCMOP{index}", d, m, n_ineq)
        self.index = index


class LIRCMOPLinear(_LIRCMOPBase):
    """LIRCMOP1-4: the distance functions must land in a thin band [0.5, 0.51]."""

    def __init__(self, index: int, d: int = 30):
        if index not in (1, 2, 3, 4):
            raise ValueError(index)
        super().__init__(index, d, 2, 3 if index >= 3 else 2)
        self.curve = "square" if index in (1, 3) else "sqrt"

    def distance_terms(self, X):
        x1 = X[:, :1]
        g1 = rowsum((X[:, 2::2] - np.sin(0.5 * np.pi * x1)) ** 2)
        g2 = rowsum((X[:, 1::2] - np.cos(0.5 * np.pi * x1)) ** 2)
        return g1, g2

    def _evaluate(self, X):
        x1 = X[:, 0]
        g1, g2 = self.distance_terms(X)
        F = np.column_stack([x1 + g1, _curve(self.curve, x1) + g2])
        cols = [-((0.51 - g1) * (g1 - 0.5)), -((0.51 - g2) * (g2 - 0.5))]
        if self.index >= 3:
            cols.append(0.5 - np.sin(20 * np.pi * x1))
        return F, np.column_stack(cols)


class _ScaledDistance(_LIRCMOPBase):
    def distance_terms(self, X):
        D = self.d
        x1 = X[:, :1]
        j = np.arange(1, D + 1, dtype=float)
        g1 = rowsum((X[:, 2::2] - np.sin(0.5 * j[2::2] * np.pi * x1 / D)) ** 2)
        g2 = rowsum((X[:, 1::2] - np.cos(0.5 * j[1::2] * np.pi * x1 / D)) ** 2)
        return g1, g2


class LIRCMOPEllipse(_ScaledDistance):
    """LIRCMOP5-8: elliptic infeasible holes placed over the shifted front."""

    def __init__(self, index: int, d: int = 30):
        if index not in _ELLIPSES:
            raise ValueError(index)
        self.curve, self.ellipses = _ELLIPSES[index]
        super().__init__(index, d, 2, len(self.ellipses))

    def _evaluate(self, X):
        x1 = X[:, 0]
        g1, g2 = self.distance_terms(X)
        f1 = x1 + 10 * g1 + _SHIFT
        f2 = _curve(self.curve, x1) + 10 * g2 + _SHIFT
        F = np.column_stack([f1, f2])
        return F, self.objective_constraints(F)

    def objective_constraints(self, F):
        F = np.asarray(F, dtype=float)
        return np.column_stack([_ellipse(F[:, 0], F[:, 1], *e) for e in self.ellipses])

    def lower_envelope(self, f1):
        """Smallest attainable f2 for each f1 (NaN where f1 is unattainable)."""
        f1 = np.asarray(f1, dtype=float)
        a = np.clip(f1 - _SHIFT, 0.0, 1.0)
        out = np.where(f1 - _SHIFT >= 1.0, _SHIFT, _curve(self.curve, a) + _SHIFT)
        return np.where(f1 < _SHIFT, np.nan, out)


class LIRCMOPWave(_ScaledDistance):
    """LIRCMOP9-12: one ellipse plus a banded wave constraint."""

    def __init__(self, index: int, d: int = 30):
        if index not in _WAVED:
            raise ValueError(index)
        self.curve, self.ellipse, self.wave_offset = _WAVED[index]
        super().__init__(index, d, 2, 2)

    def _evaluate(self, X):
        x1 = X[:, 0]
        g1, g2 = self.distance_terms(X)
        f1 = _SCALE * x1 * (10 * g1 + 1)
        f2 = _SCALE * _curve(self.curve, x1) * (10 * g2 + 1)
        F = np.column_stack([f1, f2])
        return F, self.objective_constraints(F)

    def objective_constraints(self, F):
        F = np.asarray(F, dtype=float)
        f1, f2 = F[:, 0], F[:, 1]
        return np.column_stack([_ellipse(f1, f2, *self.ellipse), _wave(f1, f2, self.wave_offset)])

    def lower_envelope(self, f1):
        f1 = np.asarray(f1, dtype=float)
        a = np.clip(f1 / _SCALE, 0.0, 1.0)
        out = np.where(f1 >= _SCALE, 0.0, _SCALE * _curve(self.curve, a))
        return np.where(f1 < 0, np.nan, out)


class LIRCMOPSphere(_LIRCMOPBase):
    """LIRCMOP13-14: three objectives, feasible shells around the origin."""

    def __init__(self, index: int, d: int = 30):
        if index not in (13, 14):
            raise ValueError(index)
        self.shells = [(9.0, 4.0), (3.61, 3.24)] + ([(3.0625, 2.56)] if index == 14 else [])
        super().__init__(index, d, 3, len(self.shells))

    def _evaluate(self, X):
        g = 10 * rowsum((X[:, 2:] - 0.5) ** 2)
        r = _SCALE + g
        c1 = np.cos(0.5 * np.pi * X[:, 0])
        F = np.column_stack(
            [
                r * c1 * np.cos(0.5 * np.pi * X[:, 1]),
                r * c1 * np.sin(0.5 * np.pi * X[:, 1]),
                r * np.sin(0.5 * np.pi * X[:, 0]),
            ]
        )
        return F, self.objective_constraints(F)

    def objective_constraints(self, F):
        F = np.asarray(F, dtype=float)
        s = rowsum(F * F)
        return np.column_stack([-((s - hi) * (s - lo)) for hi, lo in self.shells])


def make_lircmop(index: int, d: int = 30) -> Problem:
    if index in (1, 2, 3, 4):
        return LIRCMOPLinear(index, d)
    if index in _ELLIPSES:
        return LIRCMOPEllipse(index, d)
    if index in _WAVED:
        return LIRCMOPWave(index, d)
    if index in (13, 14):
        return LIRCMOPSphere(index, d)
    raise ValueError(f"no LIRCMOP{index}")
