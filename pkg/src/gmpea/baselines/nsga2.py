"""c-NSGA-II: NSGA-II with the constraint dominance principle as its dominance relation."""

from __future__ import annotations

import numpy as np

from ..operators import make_offspring
from ..population import Population
from ..problems.base import Problem
from ..runner import History, LoopClock, RunConfig, RunResult, StopRule, evaluate_or_fail, random_population
from ..scalarize import cdp_better_batch, dominates_batch


def dominance_matrix(F, cv=None, chunk: int = 1024) -> np.ndarray:
    """``D[a, b]`` is True when a dominates b; CDP when ``cv`` is given, Pareto otherwise.

    Built in row blocks so large populations never materialize an ``N x N x m`` temporary.
    """
    F = np.asarray(F, dtype=float)
    n = len(F)
    D = np.empty((n, n), dtype=bool)
    for s in range(0, n, chunk):
        blk = F[s : s + chunk, None, :]
        if cv is None:
            D[s : s + chunk] = dominates_batch(blk, F[None, :, :])
        else:
            cv = np.asarray(cv, dtype=float)
            D[s : s + chunk] = cdp_better_batch(blk, cv[s : s + chunk, None], F[None, :, :], cv[None, :])
    return D


def peel_fronts(D: np.ndarray) -> np.ndarray:
    """Front index of every individual given a dominance matrix (0 = nondominated)."""
    n = len(D)
    rank = np.full(n, -1, dtype=np.int64)
    remaining = D.sum(axis=0).astype(np.int64)
    level = 0
    todo = n
    while todo:
        front = np.flatnonzero((remaining == 0) & (rank < 0))
        if len(front) == 0:
            raise RuntimeError("dominance relation has a cycle")
        rank[front] = level
        remaining -= D[front].sum(axis=0)
        todo -= len(front)
        level += 1
    return rank


def nds_cdp(pop_or_F, cv=None) -> np.ndarray:
    """Fast non-dominated sorting under CDP; accepts a Population or ``(F, cv)``."""
    if isinstance(pop_or_F, Population):
        F, cv = pop_or_F.F, pop_or_F.cv
    else:
        F = pop_or_F
    return peel_fronts(dominance_matrix(F, cv))


def nds_pareto(F) -> np.ndarray:
    return peel_fronts(dominance_matrix(F))


def crowding(F) -> np.ndarray:
    """Crowding distance of the points of one front.

    Boundary points get +inf; interior points sum normalized neighbor gaps.
    Ties in an objective keep their input order.
    """
    F = np.asarray(F, dtype=float)
    n, m = F.shape
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        col = F[order, j]
        span = col[-1] - col[0]
        dist[order[0]] = dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist


def crowding_by_front(F, rank) -> np.ndarray:
    cd = np.empty(len(F))
    for r in np.unique(rank):
        idx = np.flatnonzero(rank == r)
        cd[idx] = crowding(F[idx])
    return cd


def binary_tournament(rank, cd, n: int, rng: np.random.Generator) -> np.ndarray:
    """Winners of ``n`` random pairings: lower rank, then larger crowding, then the first drawn."""
    a = rng.integers(0, len(rank), n)
    b = rng.integers(0, len(rank), n)
    b_wins = (rank[b] < rank[a]) | ((rank[b] == rank[a]) & (cd[b] > cd[a]))
    return np.where(b_wins, b, a)


def survivors(pop: Population, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Indices of the ``n`` best by (front, crowding), plus their ranks and crowding."""
    rank = nds_cdp(pop)
    cd = crowding_by_front(pop.F, rank)
    order = np.lexsort((-cd, rank))[:n]
    return order, rank[order], cd[order]


def run_cnsga2(problem: Problem, config: RunConfig) -> RunResult:
    N = config.n
    spec = problem.constraint_spec(config.delta)
    op = config.operator_for(problem)
    init_seed, loop_seed = np.random.SeedSequence(config.seed).spawn(2)
    rng = np.random.default_rng(loop_seed)
    dtype = config.dtype
    n_parents = 3 if op == "de" else 2

    clock = LoopClock()
    history = History(problem, config, clock)
    clock.start()
    pop = evaluate_or_fail(problem, random_population(problem, N, np.random.default_rng(init_seed)), 0, spec, dtype)
    rank = nds_cdp(pop)
    cd = crowding_by_front(pop.F, rank)
    evals = N
    history.log(0, evals, pop)
    stop = StopRule(config, N)
    gen = 0
    while stop.may_start(gen + 1, evals, clock.elapsed):
        parents = binary_tournament(rank, cd, N * n_parents, rng).reshape(n_parents, N).T
        X = make_offspring(pop.X, parents, problem.lower, problem.upper, rng, op, config)
        off = evaluate_or_fail(problem, X, gen + 1, spec, dtype)
        merged = pop.concat(off)
        keep, next_rank, next_cd = survivors(merged, N)
        wall = clock.elapsed
        if stop.overran(wall):
            break
        pop, rank, cd = merged.take(keep), next_rank, next_cd
        gen += 1
        evals += N
        history.log(gen, evals, pop, wall=wall)
    clock.stop()
    history.log(gen, evals, pop, final=True)
    return RunResult("c-NSGA-II", problem.name, config.seed, N, history.records, pop, gen, evals, clock.elapsed)
