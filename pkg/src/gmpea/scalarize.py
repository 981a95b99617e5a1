"""Constraint violation, dominance relations and PBI aggregation.

Each relation comes in a scalar form (one solution or one pair) and a batched
form (one pair per row). The batched forms perform the same floating-point
operations in the same order, so they agree with the scalar forms bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .batch import rowsum

DEFAULT_DELTA = 1e-6
DEFAULT_THETA = 5.0


@dataclass(frozen=True)
class ConstraintSpec:
    """Counts of inequality (``g <= 0``) and equality (``h = 0``) constraints."""

    n_ineq: int
    n_eq: int = 0
    delta: float = DEFAULT_DELTA

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.n_ineq < 0 or self.n_eq < 0:
            raise ValueError("constraint counts must be nonnegative")

    @property
    def n_total(self) -> int:
        return self.n_ineq + self.n_eq


@dataclass
class ScalarizationContext:
    """Reference vectors, ideal point and PBI penalty for one generation."""

    W: np.ndarray
    z: np.ndarray
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=float)
        self.z = np.asarray(self.z, dtype=float)
        if self.theta <= 0:
            raise ValueError("theta must be positive")
        if np.any(self.W < 0) or np.any(np.abs(self.W.sum(axis=1) - 1.0) > 1e-9):
            raise ValueError("reference vectors must be nonnegative with unit L1 norm")
        if self.z.shape != (self.W.shape[1],):
            raise ValueError("ideal point dimension does not match reference vectors")


# ---------------------------------------------------------------- scalar forms


def violation_per_constraint(g_vals, h_vals, spec: ConstraintSpec) -> np.ndarray:
    g_vals = [float(v) for v in np.atleast_1d(np.asarray(g_vals, dtype=float))]
    h_vals = [float(v) for v in np.atleast_1d(np.asarray(h_vals, dtype=float))]
    if len(g_vals) != spec.n_ineq or len(h_vals) != spec.n_eq:
        raise ValueError(
            f"expected {spec.n_ineq} inequality and {spec.n_eq} equality values, "
            f"got {len(g_vals)} and {len(h_vals)}"
        )
    out = [float(np.maximum(0.0, g)) for g in g_vals]
    out += [float(np.maximum(0.0, abs(h) - spec.delta)) for h in h_vals]
    return np.array(out, dtype=float)


def cv_total(g_vals, h_vals, spec: ConstraintSpec) -> float:
    acc = 0.0
    for k, c in enumerate(violation_per_constraint(g_vals, h_vals, spec)):
        acc = float(c) if k == 0 else acc + float(c)
    return acc


def pareto_dominates(fa, fb) -> bool:
    fa = np.asarray(fa, dtype=float)
    fb = np.asarray(fb, dtype=float)
    if fa.shape != fb.shape:
        raise ValueError("objective vectors differ in length")
    return bool(np.all(fa <= fb) and np.any(fa < fb))


def cdp_better(fa, cva: float, fb, cvb: float) -> bool:
    if cva < 0 or cvb < 0:
        raise ValueError("constraint violation must be nonnegative")
    if cva == 0 and cvb > 0:
        return True
    if cva == 0 and cvb == 0:
        return pareto_dominates(fa, fb)
    return bool(cva > 0 and cvb > 0 and cva < cvb)


def pbi(f, w, z, theta: float = DEFAULT_THETA) -> float:
    """Penalty boundary intersection value of ``f`` on direction ``w``.

    ``d1`` is the length of ``f - z`` projected on ``w`` (absolute value) and
    ``d2`` its distance from the ray through ``z`` along ``w``.
    """
    f = [float(v) for v in np.asarray(f, dtype=float).ravel()]
    w = [float(v) for v in np.asarray(w, dtype=float).ravel()]
    z = [float(v) for v in np.asarray(z, dtype=float).ravel()]
    if not len(f) == len(w) == len(z):
        raise ValueError("dimension mismatch between f, w and z")
    diff = [f[k] - z[k] for k in range(len(f))]
    proj = diff[0] * w[0]
    wsq = w[0] * w[0]
    for k in range(1, len(f)):
        proj = proj + diff[k] * w[k]
        wsq = wsq + w[k] * w[k]
    if wsq == 0:
        raise ValueError("zero-norm reference vector")
    wn = float(np.sqrt(wsq))
    d1 = abs(proj) / wn
    acc = 0.0
    for k in range(len(f)):
        r = diff[k] - d1 * (w[k] / wn)
        acc = r * r if k == 0 else acc + r * r
    return d1 + theta * float(np.sqrt(acc))


def fpr_better(ga: float, cva: float, gb: float, cvb: float) -> bool:
    if cva == cvb:
        return bool(ga < gb)
    return bool(cva < cvb)


# --------------------------------------------------------------- batched forms


def violation_matrix(G, spec: ConstraintSpec) -> np.ndarray:
    """Per-constraint violations for an ``N x (n_ineq + n_eq)`` raw matrix."""
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[1] != spec.n_total:
        raise ValueError(f"expected {spec.n_total} constraint columns, got shape {G.shape}")
    g = np.maximum(0.0, G[:, : spec.n_ineq])
    h = np.maximum(0.0, np.abs(G[:, spec.n_ineq :]) - spec.delta)
    return np.concatenate([g, h], axis=1)


def cv_batch(G, spec: ConstraintSpec) -> np.ndarray:
    V = violation_matrix(G, spec)
    if V.shape[1] == 0:
        return np.zeros(V.shape[0])
    return rowsum(V)


def dominates_batch(FA, FB) -> np.ndarray:
    """Rowwise Pareto dominance ``FA[i] < FB[i]``; broadcasts like numpy."""
    FA = np.asarray(FA, dtype=float)
    FB = np.asarray(FB, dtype=float)
    return np.all(FA <= FB, axis=-1) & np.any(FA < FB, axis=-1)


def cdp_better_batch(FA, cvA, FB, cvB) -> np.ndarray:
    cvA = np.asarray(cvA, dtype=float)
    cvB = np.asarray(cvB, dtype=float)
    if np.any(cvA < 0) or np.any(cvB < 0):
        raise ValueError("constraint violation must be nonnegative")
    dom = dominates_batch(FA, FB)
    a0 = cvA == 0
    b0 = cvB == 0
    return (a0 & ~b0) | (a0 & b0 & dom) | (~a0 & ~b0 & (cvA < cvB))


def pbi_batch(F, W, z, theta: float = DEFAULT_THETA) -> np.ndarray:
    """PBI of ``F[i]`` on ``W[i]``; ``W`` may also be a single shared vector.

    Leading dimensions broadcast, the last axis holds objectives.
    """
    F = np.asarray(F, dtype=float)
    W = np.asarray(W, dtype=float)
    z = np.asarray(z, dtype=float)
    diff = F - z
    wsq = rowsum(W * W)
    if np.any(wsq == 0):
        raise ValueError("zero-norm reference vector")
    proj = rowsum(diff * W)
    wn = np.sqrt(wsq)
    d1 = np.abs(proj) / wn
    u = W / wn[..., None]
    r = diff - d1[..., None] * u
    return d1 + theta * np.sqrt(rowsum(r * r))


def fpr_better_batch(gA, cvA, gB, cvB) -> np.ndarray:
    gA, cvA, gB, cvB = (np.asarray(v, dtype=float) for v in (gA, cvA, gB, cvB))
    eq = cvA == cvB
    return (eq & (gA < gB)) | (~eq & (cvA < cvB))


def cdp_matrix(F, cv) -> np.ndarray:
    """``D[a, b]`` is True when individual a CDP-dominates b."""
    F = np.asarray(F, dtype=float)
    cv = np.asarray(cv, dtype=float)
    return cdp_better_batch(F[:, None, :], cv[:, None], F[None, :, :], cv[None, :])


def pareto_matrix(F) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    return dominates_batch(F[:, None, :], F[None, :, :])
