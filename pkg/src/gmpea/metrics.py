"""Quality metrics (IGD, HV), feasibility statistics and the rank-sum test."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import norm, rankdata

HV_REF = 1.1
MC_SAMPLES = 1_000_000
MC_SEED = 0


def _as_points(P) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.ndim == 1:
        P = P[None, :] if P.size else P.reshape(0, 0)
    return P


def igd(P, P_ref, chunk: int = 1024) -> float:
    """Mean distance from each reference point to its nearest point of ``P``.

    Returns +inf when ``P`` is empty.
    """
    P = _as_points(P)
    R = _as_points(P_ref)
    if len(R) == 0:
        raise ValueError("reference set is empty")
    if len(P) == 0:
        return math.inf
    if P.shape[1] != R.shape[1]:
        raise ValueError("objective counts differ")
    P = np.unique(P, axis=0)
    nearest = np.empty(len(R))
    for s in range(0, len(R), chunk):
        blk = R[s : s + chunk]
        d2 = np.sum((blk[:, None, :] - P[None, :, :]) ** 2, axis=2)
        nearest[s : s + chunk] = np.sqrt(d2.min(axis=1))
    return float(nearest.mean())


def _retained(P, ref) -> tuple[np.ndarray, np.ndarray]:
    P = _as_points(P)
    ref = np.asarray(ref, dtype=float)
    if len(P) and P.shape[1] != ref.shape[0]:
        raise ValueError("reference point dimension differs from P")
    if len(P) == 0:
        return P.reshape(0, ref.shape[0]), ref
    return np.unique(P[np.all(P < ref, axis=1)], axis=0), ref


def _hv2d(P: np.ndarray, ref: np.ndarray) -> float:
    if len(P) == 0:
        return 0.0
    P = P[np.lexsort((P[:, 1], P[:, 0]))]
    area = 0.0
    best = ref[1]
    for x, y in P:
        if y < best:
            area += (ref[0] - x) * (best - y)
            best = y
    return area


def _hv3d(P: np.ndarray, ref: np.ndarray) -> float:
    # sweep along f3: between consecutive levels the dominated slice is the
    # 2-D hypervolume of every point already passed
    P = P[np.argsort(P[:, 2], kind="stable")]
    vol = 0.0
    levels = np.append(P[:, 2], ref[2])
    for k in range(len(P)):
        thick = levels[k + 1] - levels[k]
        if thick > 0:
            vol += _hv2d(P[: k + 1, :2], ref[:2]) * thick
    return vol


def hv(P, ref) -> float:
    """Hypervolume dominated by ``P`` and bounded by ``ref`` (minimization).

    Exact for two and three objectives; above three it falls back to
    :func:`hv_monte_carlo` with ``MC_SAMPLES`` samples and seed ``MC_SEED``.
    """
    P, ref = _retained(P, ref)
    if len(P) == 0:
        return 0.0
    m = P.shape[1]
    if m == 1:
        return float(ref[0] - P[:, 0].min())
    if m == 2:
        return float(_hv2d(P, ref))
    if m == 3:
        return float(_hv3d(P, ref))
    return hv_monte_carlo(P, ref)


def hv_monte_carlo(P, ref, n_samples: int = MC_SAMPLES, seed: int = MC_SEED, chunk: int = 100_000) -> float:
    """Uniform sampling estimate of the hypervolume inside the box [min(P), ref]."""
    P, ref = _retained(P, ref)
    if len(P) == 0:
        return 0.0
    lo = P.min(axis=0)
    box = float(np.prod(ref - lo))
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < n_samples:
        k = min(chunk, n_samples - done)
        S = lo + rng.random((k, P.shape[1])) * (ref - lo)
        covered = np.zeros(k, dtype=bool)
        for p in P:
            covered |= np.all(S >= p, axis=1)
        hits += int(covered.sum())
        done += k
    return box * hits / n_samples


def normalize_for_hv(P, ideal, nadir) -> tuple[np.ndarray, np.ndarray]:
    """Map ``ideal -> 0`` and ``nadir -> 1`` per axis; the HV reference is 1.1 everywhere."""
    ideal = np.asarray(ideal, dtype=float)
    nadir = np.asarray(nadir, dtype=float)
    span = nadir - ideal
    if np.any(span <= 0):
        raise ValueError("degenerate normalization axis: nadir must exceed ideal on every objective")
    P = _as_points(P)
    return (P - ideal) / span, np.full(ideal.shape, HV_REF)


def denormalize(Pn, ideal, nadir) -> np.ndarray:
    ideal = np.asarray(ideal, dtype=float)
    nadir = np.asarray(nadir, dtype=float)
    return _as_points(Pn) * (nadir - ideal) + ideal


def ranksum_test(a, b) -> tuple[float, float, float]:
    """Two-sided Wilcoxon rank-sum test.

    Returns ``(W, z, p)`` where ``W`` is the rank sum of ``a``. Uses the
    normal approximation with tie-corrected variance and a 0.5 continuity
    correction.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    n1, n2 = len(a), len(b)
    ranks = rankdata(np.concatenate([a, b]))
    W = float(ranks[:n1].sum())
    n = n1 + n2
    mu = n1 * (n + 1) / 2.0
    _, counts = np.unique(np.concatenate([a, b]), return_counts=True)
    tie = float(np.sum(counts**3 - counts))
    var = n1 * n2 / 12.0 * ((n + 1) - tie / (n * (n - 1)))
    if var <= 0:
        return W, 0.0, 1.0
    diff = W - mu
    z = (diff - 0.5 * np.sign(diff)) / math.sqrt(var)
    return W, float(z), float(2 * norm.sf(abs(z)))


def wilcoxon_sign(a, b, alpha: float = 0.05, lower_is_better: bool = True) -> str:
    """'+' when ``a`` is significantly better than ``b``, '-' when worse, '=' otherwise."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if len(a) < 5 or len(b) < 5:
        raise ValueError("need at least 5 samples per group")
    W, z, p = ranksum_test(a, b)
    if not p < alpha:
        return "="
    ma, mb = np.median(a), np.median(b)
    a_lower = ma < mb if ma != mb else z < 0
    return "+" if a_lower == lower_is_better else "-"


@dataclass
class MetricReport:
    igd: float | None
    hv: float | None
    feasible_ratio: float
    n_points: int
    no_feasible: bool = False
    hv_ref: float = HV_REF
    deduplicated: bool = True

    def as_dict(self) -> dict:
        return asdict(self)


def feasible_front(F, cv) -> np.ndarray:
    """Deduplicated nondominated subset of the feasible rows of ``F``."""
    F = _as_points(F)
    cv = np.asarray(cv, dtype=float)
    Q = np.unique(F[cv == 0], axis=0)
    if len(Q) < 2:
        return Q
    dominated = np.zeros(len(Q), dtype=bool)
    for s in range(0, len(Q), 512):
        blk = Q[s : s + 512]
        le = np.all(Q[:, None, :] <= blk[None, :, :], axis=2)
        lt = np.any(Q[:, None, :] < blk[None, :, :], axis=2)
        dominated[s : s + 512] = np.any(le & lt, axis=0)
    return Q[~dominated]


def metric_report(F, cv, P_ref=None, ideal=None, nadir=None) -> MetricReport:
    cv = np.asarray(cv, dtype=float)
    front = feasible_front(F, cv)
    ratio = float(np.mean(cv == 0)) if len(cv) else 0.0
    value_igd = None if P_ref is None else igd(front, P_ref)
    value_hv = None
    if ideal is not None and nadir is not None:
        Pn, ref = normalize_for_hv(front, ideal, nadir) if len(front) else (front, None)
        value_hv = hv(Pn, ref) if len(front) else 0.0
    return MetricReport(value_igd, value_hv, ratio, int(len(front)), no_feasible=len(front) == 0)
