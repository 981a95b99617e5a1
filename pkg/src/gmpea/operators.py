"""Real-coded variation operators: SBX, polynomial mutation and DE/rand/1/bin.

All operators act on whole parent matrices at once. Random numbers are drawn
in a fixed order so a given generator state always yields the same offspring.
"""

from __future__ import annotations

import numpy as np


def sbx(P1, P2, rng: np.random.Generator, eta: float = 20.0, pc: float = 1.0) -> np.ndarray:
    """Simulated binary crossover returning the first child of each pair.

    Each variable is recombined with probability 0.5; each pair crosses at
    all with probability ``pc`` and otherwise returns ``P1`` unchanged.
    """
    P1 = np.asarray(P1, dtype=float)
    P2 = np.asarray(P2, dtype=float)
    N, D = P1.shape
    mu = rng.random((N, D))
    beta = np.where(mu <= 0.5, (2 * mu) ** (1 / (eta + 1)), (2 - 2 * mu) ** (-1 / (eta + 1)))
    beta = beta * np.where(rng.random((N, D)) < 0.5, -1.0, 1.0)
    beta[rng.random((N, D)) < 0.5] = 1.0
    beta[rng.random(N) >= pc] = 1.0
    return (P1 + P2) / 2 + beta * (P1 - P2) / 2


def polynomial_mutation(X, lower, upper, rng: np.random.Generator, eta: float = 20.0, pm: float | None = None) -> np.ndarray:
    """Polynomial mutation with per-variable rate ``pm`` (default ``1/d``)."""
    X = np.clip(np.asarray(X, dtype=float), lower, upper)
    N, D = X.shape
    rate = 1.0 / D if pm is None else pm
    site = rng.random((N, D)) < rate
    mu = rng.random((N, D))
    span = np.broadcast_to(upper - lower, X.shape)
    lo = np.broadcast_to(lower, X.shape)
    hi = np.broadcast_to(upper, X.shape)
    out = X.copy()
    down = site & (mu <= 0.5)
    if down.any():
        x, s, m = X[down], span[down], mu[down]
        delta = (2 * m + (1 - 2 * m) * (1 - (x - lo[down]) / s) ** (eta + 1)) ** (1 / (eta + 1)) - 1
        out[down] = x + s * delta
    up = site & (mu > 0.5)
    if up.any():
        x, s, m = X[up], span[up], mu[up]
        delta = 1 - (2 * (1 - m) + 2 * (m - 0.5) * (1 - (hi[up] - x) / s) ** (eta + 1)) ** (1 / (eta + 1))
        out[up] = x + s * delta
    return out


def de_trial(base, r1, r2, rng: np.random.Generator, f: float = 0.5, cr: float = 1.0) -> np.ndarray:
    """``base + f * (r1 - r2)`` on variables chosen with probability ``cr``."""
    base = np.asarray(base, dtype=float)
    site = rng.random(base.shape) < cr
    return np.where(site, base + f * (np.asarray(r1) - np.asarray(r2)), base)


def neighbor_parents(B: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``k`` parent indices per row of the neighborhood matrix ``B``.

    Parents are distinct within a row whenever the row is long enough.
    """
    N, t = B.shape
    if t >= k:
        pick = np.argsort(rng.random((N, t)), axis=1)[:, :k]
    else:
        pick = rng.integers(0, t, size=(N, k))
    return np.take_along_axis(B, pick, axis=1)


def make_offspring(X, parents, lower, upper, rng, operator: str, cfg, own=None) -> np.ndarray:
    """One mutated, clipped child per row of the parent-index matrix ``parents``.

    SBX uses the first two columns. DE adds the difference of two columns to
    a base vector: ``own`` (the subproblem's current solution) when given,
    otherwise the first column.
    """
    X = np.asarray(X, dtype=float)
    if operator == "sbx":
        child = sbx(X[parents[:, 0]], X[parents[:, 1]], rng, cfg.eta_c, cfg.pc)
    elif operator == "de":
        if own is not None:
            base, a, b = own, X[parents[:, 0]], X[parents[:, 1]]
        else:
            base, a, b = X[parents[:, 0]], X[parents[:, 1]], X[parents[:, 2]]
        child = de_trial(base, a, b, rng, cfg.de_f, cfg.de_cr)
    else:
        raise ValueError(f"unknown operator {operator!r}")
    child = polynomial_mutation(child, lower, upper, rng, cfg.eta_m, cfg.pm)
    return np.clip(child, lower, upper)
