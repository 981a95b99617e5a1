"""GMPEA: a decomposition-based dual-population algorithm with branch-free selection.

Pop1 solves the constrained problem on a small neighborhood, Pop2 ignores
constraints on a large one. Each generation both populations produce one
offspring per subproblem, and environmental selection runs in three batched
stages:

1. offspring cooperation: each stream may adopt the other's offspring;
2. update indexing: every offspring marks the neighbor slots it beats;
3. elite update: each slot keeps the best of its parent and the offspring
   that marked it.

Nothing in the selection branches on individual values; every decision is a
mask fed to :func:`gmpea.batch.masked_select` or a first-occurrence argmin.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .batch import SENTINEL, masked_select, rowsum
from .operators import make_offspring, neighbor_parents
from .population import Population
from .problems.base import Problem
from .runner import History, LoopClock, RunConfig, RunResult, StopRule, evaluate_or_fail, random_population
from .scalarize import fpr_better_batch, pbi_batch


# ------------------------------------------------------------ setup helpers


def lattice_size(m: int, H: int) -> int:
    return comb(H + m - 1, m - 1)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def reference_vectors(m: int, target_n: int) -> np.ndarray:
    """Simplex-lattice weights, exactly ``target_n`` rows.

    Uses the smallest lattice parameter ``H`` with at least ``target_n``
    points, listed in descending lexicographic order (so ``(1, 0, ...)``
    comes first) and cut from the tail.
    """
    if m < 2:
        raise ValueError("need at least two objectives")
    if target_n < m:
        raise ValueError(f"target_n={target_n} is below the objective count {m}")
    H = 1
    while lattice_size(m, H) < target_n:
        H += 1
    W = np.array(list(_compositions(H, m))[:target_n], dtype=float) / H
    return W


@dataclass
class NeighborhoodTopology:
    """Neighbor lists plus their inverses.

    ``inv1[j]`` lists the pairs ``(i, k)`` with ``B1[i, k] == j`` in increasing
    ``i``; it lets the elite update gather candidates per slot without an
    ``N x N`` matrix. Padding uses the -1 sentinel.
    """

    B1: np.ndarray
    B2: np.ndarray
    inv1_i: np.ndarray
    inv1_k: np.ndarray
    inv2_i: np.ndarray
    inv2_k: np.ndarray

    @property
    def t1(self) -> int:
        return self.B1.shape[1]

    @property
    def t2(self) -> int:
        return self.B2.shape[1]


def nearest_indices(W: np.ndarray, t: int, chunk: int = 512) -> np.ndarray:
    """Rows of the ``t`` nearest weight vectors, ties to the lower index."""
    W = np.asarray(W, dtype=float)
    N = len(W)
    out = np.empty((N, t), dtype=np.int64)
    for s in range(0, N, chunk):
        blk = W[s : s + chunk]
        d2 = rowsum((blk[:, None, :] - W[None, :, :]) ** 2)
        out[s : s + chunk] = np.argsort(d2, axis=1, kind="stable")[:, :t]
    return out


def invert_neighborhood(B: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    N, t = B.shape
    j = B.ravel()
    i = np.repeat(np.arange(N), t)
    k = np.tile(np.arange(t), N)
    order = np.lexsort((i, j))
    j, i, k = j[order], i[order], k[order]
    counts = np.bincount(j, minlength=n)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    pos = np.arange(len(j)) - starts[j]
    width = int(counts.max()) if len(counts) else 0
    inv_i = np.full((n, width), SENTINEL, dtype=np.int64)
    inv_k = np.zeros((n, width), dtype=np.int64)
    inv_i[j, pos] = i
    inv_k[j, pos] = k
    return inv_i, inv_k


def build_neighborhoods(W: np.ndarray, t1: int, t2: int) -> NeighborhoodTopology:
    """Nearest-neighbor index rows for both populations.

    ``t1 < t2`` is the usual setting; equal or swapped sizes are accepted so
    the fixed-size and swapped variants need no code changes.
    """
    N = len(W)
    if max(t1, t2) > N:
        raise ValueError(f"neighborhood size {max(t1, t2)} exceeds population size {N}")
    if min(t1, t2) < 1:
        raise ValueError("neighborhood sizes must be positive")
    full = nearest_indices(W, max(t1, t2))
    B1, B2 = full[:, :t1].copy(), full[:, :t2].copy()
    inv1 = invert_neighborhood(B1, N)
    inv2 = invert_neighborhood(B2, N)
    return NeighborhoodTopology(B1, B2, *inv1, *inv2)


def update_ideal(z, F_new) -> np.ndarray:
    F_new = np.asarray(F_new, dtype=float)
    z = np.asarray(z, dtype=float)
    if F_new.size == 0:
        return z.copy()
    return np.minimum(z, F_new.min(axis=0))


def reproduce(pop: Population, B: np.ndarray, problem: Problem, rng: np.random.Generator, operator: str, cfg) -> np.ndarray:
    """One offspring per subproblem with parents from that subproblem's row of ``B``."""
    parents = neighbor_parents(B, 2, rng)
    own = pop.X if operator == "de" else None
    return make_offspring(pop.X, parents, problem.lower, problem.upper, rng, operator, cfg, own=own)


# ---------------------------------------------------------- selection stages


def _select_rows(mask, a: Population, b: Population) -> Population:
    return Population(
        masked_select(mask, a.X, b.X),
        masked_select(mask, a.F, b.F),
        masked_select(mask, a.C, b.C),
        masked_select(mask, a.cv, b.cv),
    )


def op1_offspring_cooperation(off1: Population, off2: Population, W, z, theta: float):
    """Each subproblem's constrained offspring may be swapped for the unconstrained one and vice versa."""
    g1 = pbi_batch(off1.F, W, z, theta)
    g2 = pbi_batch(off2.F, W, z, theta)
    s1 = ((g1 > g2) & (off1.cv == off2.cv)) | (off2.cv < off1.cv)
    s2 = g2 > g1
    new1 = _select_rows(s1.astype(np.int8), off2, off1)
    new2 = _select_rows(s2.astype(np.int8), off1, off2)
    return new1, new2


def op2_update_indexing(topo: NeighborhoodTopology, off1: Population, off2: Population,
                        pop1: Population, pop2: Population, W, z, theta: float):
    """Replacement marks: ``I[i, k]`` is -1 when offspring i beats the parent in slot ``B[i, k]``."""
    B1, B2 = topo.B1, topo.B2
    g_old1 = pbi_batch(pop1.F[B1], W[B1], z, theta)
    g_new1 = pbi_batch(off1.F[:, None, :], W[B1], z, theta)
    mark1 = fpr_better_batch(g_new1, off1.cv[:, None], g_old1, pop1.cv[B1]).astype(np.int64)
    g_old2 = pbi_batch(pop2.F[B2], W[B2], z, theta)
    g_new2 = pbi_batch(off2.F[:, None, :], W[B2], z, theta)
    mark2 = (g_old2 > g_new2).astype(np.int64)
    I1 = mark1 * SENTINEL + (1 - mark1) * B1
    I2 = mark2 * SENTINEL + (1 - mark2) * B2
    return I1, I2


def transpose_updates(I: np.ndarray, inv_i: np.ndarray, inv_k: np.ndarray) -> np.ndarray:
    """Per parent slot, the offspring indices that marked it (ascending), -1 elsewhere."""
    valid = inv_i >= 0
    src = np.where(valid, inv_i, 0)
    marked = I[src, inv_k] == SENTINEL
    return np.where(valid & marked, inv_i, SENTINEL)


def dense_update_matrix(I: np.ndarray, B: np.ndarray, n: int) -> np.ndarray:
    """``N x N`` form: row i holds -1 on the slots offspring i replaces, the slot index elsewhere."""
    D = np.tile(np.arange(n), (len(I), 1))
    rows = np.repeat(np.arange(len(I)), I.shape[1])
    cols = B.ravel()
    D[rows, cols] = I.ravel()
    return D


def _elite(T: np.ndarray, parent: Population, off: Population, W, z, theta: float, constrained: bool) -> Population:
    has = T >= 0
    src = np.where(has, T, 0)
    g_par = pbi_batch(parent.F, W, z, theta)
    g_off = pbi_batch(off.F[src], W[:, None, :], z, theta)
    g = np.concatenate([g_par[:, None], np.where(has, g_off, np.inf)], axis=1)
    if constrained:
        cv = np.concatenate([parent.cv[:, None], np.where(has, off.cv[src], np.inf)], axis=1)
        g = np.where(cv == cv.min(axis=1, keepdims=True), g, np.inf)
    best = np.argmin(g, axis=1)  # first occurrence: parent, then ascending offspring index
    rows = np.arange(len(T))
    chosen = np.where(best == 0, SENTINEL, T[rows, np.maximum(best - 1, 0)])
    take = chosen >= 0
    cand = off.take(np.where(take, chosen, 0))
    return _select_rows(take.astype(np.int8), cand, parent)


def op3_elite_update(T1, T2, pop1: Population, pop2: Population, off1: Population, off2: Population, W, z, theta: float):
    """Resolve every slot: Pop1 by minimal CV then PBI, Pop2 by PBI alone.

    ``T1``/``T2`` come from :func:`transpose_updates`; row j lists the
    offspring that marked slot j.
    """
    return _elite(T1, pop1, off1, W, z, theta, True), _elite(T2, pop2, off2, W, z, theta, False)


def environmental_selection(pop1: Population, pop2: Population, off1: Population, off2: Population,
                            topo: NeighborhoodTopology, W, z, theta: float = 5.0):
    off1c, off2c = op1_offspring_cooperation(off1, off2, W, z, theta)
    I1, I2 = op2_update_indexing(topo, off1c, off2c, pop1, pop2, W, z, theta)
    T1 = transpose_updates(I1, topo.inv1_i, topo.inv1_k)
    T2 = transpose_updates(I2, topo.inv2_i, topo.inv2_k)
    return op3_elite_update(T1, T2, pop1, pop2, off1c, off2c, W, z, theta)


# ------------------------------------------------------------------- driver


def run(problem: Problem, config: RunConfig) -> RunResult:
    """Evolve both populations until a stop rule binds; returns Pop1 and the history."""
    W = reference_vectors(problem.m, config.n)
    N = len(W)
    topo = build_neighborhoods(W, config.t1, config.t2)
    spec = problem.constraint_spec(config.delta)
    op = config.operator_for(problem)
    seeds = np.random.SeedSequence(config.seed).spawn(3)
    rng_init1, rng_init2, rng = (np.random.default_rng(s) for s in seeds)
    dtype = config.dtype

    clock = LoopClock()
    history = History(problem, config, clock)
    clock.start()
    pop1 = evaluate_or_fail(problem, random_population(problem, N, rng_init1), 0, spec, dtype)
    pop2 = evaluate_or_fail(problem, random_population(problem, N, rng_init2), 0, spec, dtype)
    z = update_ideal(np.minimum(pop1.F.min(axis=0), pop2.F.min(axis=0)), pop2.F)
    evals = 2 * N
    history.log(0, evals, pop1)
    stop = StopRule(config, 2 * N)
    gen = 0
    while stop.may_start(gen + 1, evals, clock.elapsed):
        X1 = reproduce(pop1, topo.B1, problem, rng, op, config)
        X2 = reproduce(pop2, topo.B2, problem, rng, op, config)
        off1 = evaluate_or_fail(problem, X1, gen + 1, spec, dtype)
        off2 = evaluate_or_fail(problem, X2, gen + 1, spec, dtype)
        z_next = update_ideal(z, np.concatenate([off1.F, off2.F]))
        next1, next2 = environmental_selection(pop1, pop2, off1, off2, topo, W, z_next, config.theta)
        wall = clock.elapsed
        if stop.overran(wall):
            break  # finished after the deadline: discard
        pop1, pop2, z = next1, next2, z_next
        gen += 1
        evals += 2 * N
        history.log(gen, evals, pop1, wall=wall)
    clock.stop()
    history.log(gen, evals, pop1, final=True)
    return RunResult("GMPEA", problem.name, config.seed, N, history.records, pop1, gen, evals, clock.elapsed,
                     extra={"pop2": pop2, "z": z})
