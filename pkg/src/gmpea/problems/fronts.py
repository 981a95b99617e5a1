"""Reference Pareto fronts for IGD.

Fronts are generated once from the problem definitions and stored under
``data/fronts`` as plain text: a header ``# <problem> m=<m>`` followed by one
space-separated point per line. Points are stored in farthest-point order,
so any prefix of a file is itself a well-spread subsample.

Generation strategies:

* problems whose constraints live in decision space (LIRCMOP1-4, LIRCMOP13-14
  and every DTLZ-based problem) get decision vectors built on the optimal
  manifold, evaluated with the problem itself, and filtered to ``cv == 0``;
* LIRCMOP5-12 are scanned in objective space: for each f1 on a fine grid,
  walk up from the lowest attainable f2 to the first feasible value, refine by
  bisection on the feasible side, then keep the nondominated points.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..scalarize import cv_batch
from .base import Problem
from .dtlz import ConstrainedDTLZ
from .lircmop import LIRCMOPEllipse, LIRCMOPLinear, LIRCMOPSphere, LIRCMOPWave
from .wta import WTAProblem

FRONT_DIR = Path(__file__).parent / "data" / "fronts"
DEFAULT_POINTS = 10_000
_DIGITS = 12


class UnknownFrontError(ValueError):
    pass


def front_path(name: str, directory: Path | None = None) -> Path:
    return Path(directory or FRONT_DIR) / f"{name}.txt"


def write_front(path: Path, name: str, P: np.ndarray) -> None:
    P = np.asarray(P, dtype=float)
    lines = [f"# {name} m={P.shape[1]}"]
    lines += [" ".join(f"{v:.{_DIGITS}g}" for v in row) for row in P]
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text("\n".join(lines) + "\n")


def read_front(path: Path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("#") or "m=" not in header:
            raise ValueError(f"{path}: missing '# <problem> m=<m>' header")
        m = int(header.rsplit("m=", 1)[1])
        P = np.loadtxt(fh, ndmin=2)
    if P.shape[1] != m:
        raise ValueError(f"{path}: header says m={m} but rows have {P.shape[1]} values")
    return P


def pf_reference(problem: Problem, n_points: int | None = None, directory: Path | None = None) -> np.ndarray:
    """Return up to ``n_points`` reference-front points, generating the file if needed.

    Discrete fronts (LIRCMOP11/12) have fewer points than requested; all of
    them are returned.
    """
    if isinstance(problem, WTAProblem) or problem.encoding != "continuous":
        raise UnknownFrontError(f"{problem.name} has no analytic front; compare runs with hv instead")
    path = front_path(problem.name, directory)
    if path.exists():
        P = read_front(path)
    else:
        P = generate_front(problem, DEFAULT_POINTS)
        write_front(path, problem.name, P)
        P = read_front(path)
    return P if n_points is None else P[:n_points]


# ---------------------------------------------------------------- generation


def generate_front(problem: Problem, n_points: int = DEFAULT_POINTS) -> np.ndarray:
    if isinstance(problem, (LIRCMOPEllipse, LIRCMOPWave)):
        cand = _scan_envelope(problem)
    elif isinstance(problem, LIRCMOPLinear):
        cand = _feasible(problem, _lircmop_linear_x(problem))
    elif isinstance(problem, LIRCMOPSphere):
        cand = _feasible(problem, _lircmop_sphere_x(problem))
    elif isinstance(problem, ConstrainedDTLZ):
        cand = _feasible(problem, _dtlz_x(problem))
    else:
        raise UnknownFrontError(f"no front generator for {problem.name}")
    # store exactly what the text file will hold; boundary points that the
    # rounding pushed outside the feasible set are nudged outward
    cand = _round(cand)
    if problem.objective_constraints(cand[:1]) is not None:
        for k in range(6):
            bad = ~np.all(problem.objective_constraints(cand) <= 0, axis=1)
            if not bad.any():
                break
            cand[bad] = _round(cand[bad] * (1 + 1e-11 * 4**k))
        cand = cand[np.all(problem.objective_constraints(cand) <= 0, axis=1)]
    cand = np.unique(cand, axis=0)
    if cand.shape[1] == 2:
        return farthest_point_order(nondominated(cand), n_points)
    # surfaces are nondominated by construction; filter after thinning to
    # catch rounding artefacts without a quadratic pass over every candidate
    P = farthest_point_order(cand, n_points)
    return nondominated(P)


def _round(P: np.ndarray) -> np.ndarray:
    # round-trip through the text representation used by write_front
    return np.array(np.char.mod(f"%.{_DIGITS}g", P), dtype=float)


def _feasible(problem: Problem, X: np.ndarray) -> np.ndarray:
    F, G = problem.evaluate(X)
    return F[cv_batch(G, problem.constraint_spec()) == 0]


def nondominated(P: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """Rows of ``P`` not Pareto-dominated by any other row."""
    P = np.asarray(P, dtype=float)
    if P.shape[1] == 2:
        order = np.lexsort((P[:, 1], P[:, 0]))
        S = P[order]
        best = np.minimum.accumulate(S[:, 1])
        keep = np.ones(len(S), dtype=bool)
        keep[1:] = S[1:, 1] < best[:-1]
        return S[keep]
    keep = np.ones(len(P), dtype=bool)
    for s in range(0, len(P), chunk):
        blk = P[s : s + chunk]
        dom = np.zeros(len(blk), dtype=bool)
        for t in range(0, len(P), chunk):
            other = P[t : t + chunk]
            le = np.all(other[:, None, :] <= blk[None, :, :], axis=2)
            lt = np.any(other[:, None, :] < blk[None, :, :], axis=2)
            dom |= np.any(le & lt, axis=0)
        keep[s : s + chunk] = ~dom
    return P[keep]


def farthest_point_order(P: np.ndarray, n_points: int) -> np.ndarray:
    """Greedy farthest-point ordering starting from the lexicographically first point."""
    P = np.asarray(P, dtype=float)
    if len(P) == 0:
        return P
    n = min(n_points, len(P))
    start = int(np.lexsort(P.T[::-1])[0])
    chosen = [start]
    dist = np.sqrt(np.sum((P - P[start]) ** 2, axis=1))
    for _ in range(n - 1):
        nxt = int(np.argmax(dist))
        chosen.append(nxt)
        dist = np.minimum(dist, np.sqrt(np.sum((P - P[nxt]) ** 2, axis=1)))
    return P[chosen]


def _place(center: np.ndarray, target: float, count: int) -> np.ndarray:
    """Offsets around ``center`` (N x count) whose squared sum equals ``target``."""
    t = np.sqrt(target / count)
    up = center + t
    return np.where(up <= 1.0, up, center - t)


def _lircmop_linear_x(problem: LIRCMOPLinear, n: int = 40_000) -> np.ndarray:
    x1 = np.linspace(0.0, 1.0, n)
    if problem.index >= 3:
        x1 = x1[0.5 - np.sin(20 * np.pi * x1) <= 0]
    X = np.zeros((len(x1), problem.d))
    X[:, 0] = x1
    target = 0.5 + 1e-7
    s = np.sin(0.5 * np.pi * x1)[:, None]
    c = np.cos(0.5 * np.pi * x1)[:, None]
    n1 = X[:, 2::2].shape[1]
    n2 = X[:, 1::2].shape[1]
    X[:, 2::2] = _place(np.repeat(s, n1, axis=1), target, n1)
    X[:, 1::2] = _place(np.repeat(c, n2, axis=1), target, n2)
    return np.clip(X, 0.0, 1.0)


def _grid(n_side: int, m: int) -> np.ndarray:
    axes = [np.linspace(0.0, 1.0, n_side)] * (m - 1)
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, m - 1)


def _lircmop_sphere_x(problem: LIRCMOPSphere, n_side: int = 250) -> np.ndarray:
    pos = _grid(n_side, 3)
    X = np.full((len(pos), problem.d), 0.5)
    X[:, :2] = pos
    if problem.index == 14:
        # radius sqrt(3.0625) = 1.75 from the shell constraint, nudged outward
        g = (1.75 + 1e-9) - 1.7057
        k = problem.d - 2
        X[:, 2:] = 0.5 + np.sqrt(g / 10 / k)
    return X


def _dtlz_x(problem: ConstrainedDTLZ, n_side: int = 250) -> np.ndarray:
    m = problem.m
    pos = _grid(n_side if m == 3 else max(4, int(round(60_000 ** (1 / (m - 1))))), m)
    if problem.core == "DTLZ4":
        pos = pos ** (1 / 100.0)
    k = problem.d - m + 1
    X = np.full((len(pos), problem.d), 0.5)
    X[:, : m - 1] = pos
    if problem.family == "C3":
        # the front sits on the constraint boundary: scale each unit-sphere
        # point by 1 / sqrt(1 - 3/4 max f^2), realized through the g term
        F0, _ = problem.evaluate(X)
        scale = 1.0 / np.sqrt(1.0 - 0.75 * np.max(F0 * F0, axis=1))
        g = scale * (1 + 1e-10) - 1.0
        X[:, m - 1 :] = 0.5 + np.sqrt(g / k)[:, None]
    return np.clip(X, 0.0, 1.0)


def _scan_envelope(problem, n_f1: int = 20_000, step: float = 2e-3, height: float = 4.0) -> np.ndarray:
    if isinstance(problem, LIRCMOPEllipse):
        lo, hi = 0.7057, 4.0
    else:
        lo, hi = 0.0, 3.5
    f1 = np.linspace(lo, hi, n_f1)
    base = problem.lower_envelope(f1)
    offsets = np.arange(0.0, height, step)
    found = np.full(n_f1, np.nan)
    below = np.full(n_f1, np.nan)

    def feasible(a, b):
        G = problem.objective_constraints(np.column_stack([a, b]))
        return np.all(G <= 0, axis=1)

    for s in range(0, n_f1, 500):
        sl = slice(s, s + 500)
        a = np.repeat(f1[sl], len(offsets))
        b = (base[sl][:, None] + offsets[None, :]).ravel()
        ok = feasible(a, b).reshape(-1, len(offsets))
        has = ok.any(axis=1)
        first = np.argmax(ok, axis=1)
        idx = np.arange(s, min(s + 500, n_f1))
        found[idx[has]] = base[idx[has]] + offsets[first[has]]
        below[idx[has]] = np.where(first[has] > 0, base[idx[has]] + offsets[np.maximum(first[has] - 1, 0)], np.nan)
    # bisection between the last infeasible and first feasible grid value
    refine = ~np.isnan(below)
    a = f1[refine]
    lo_b, hi_b = below[refine], found[refine]
    for _ in range(50):
        mid = 0.5 * (lo_b + hi_b)
        ok = feasible(a, mid)
        hi_b = np.where(ok, mid, hi_b)
        lo_b = np.where(ok, lo_b, mid)
    found[refine] = hi_b
    keep = ~np.isnan(found)
    return nondominated(np.column_stack([f1[keep], found[keep]]))
