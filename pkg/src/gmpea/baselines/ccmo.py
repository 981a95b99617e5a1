"""CCMO-style coevolution: a constrained and an unconstrained population under SPEA2 selection.

Both populations breed half a population of offspring per generation, and
every offspring competes in both environmental selections. The truncation
step is serial on purpose: each removal changes the neighbor distances the
next removal depends on.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from ..operators import make_offspring
from ..population import Population
from ..problems.base import Problem
from ..runner import History, LoopClock, RunConfig, RunResult, StopRule, evaluate_or_fail, random_population
from .nsga2 import dominance_matrix


def kth_neighbor_distance(F, k: int, chunk: int = 1024) -> np.ndarray:
    """Distance from each row to its ``k``-th nearest other row (k counts from 1)."""
    F = np.asarray(F, dtype=float)
    n = len(F)
    out = np.empty(n)
    for s in range(0, n, chunk):
        d = cdist(F[s : s + chunk], F)
        d[np.arange(len(d)), np.arange(s, s + len(d))] = np.inf
        out[s : s + chunk] = np.partition(d, k - 1, axis=1)[:, k - 1]
    return out


def spea2_fitness(F, cv=None) -> np.ndarray:
    """Raw strength fitness plus ``1 / (sigma_k + 2)`` density, ``k = floor(sqrt(N))``.

    Dominance is CDP when ``cv`` is given and plain Pareto otherwise. Values
    below 1 mark nondominated individuals.
    """
    F = np.asarray(F, dtype=float)
    n = len(F)
    D = dominance_matrix(F, cv)
    strength = D.sum(axis=1).astype(float)
    raw = np.zeros(n)
    for b in range(0, n, 1024):  # row blocks keep the float copy of D small
        raw += strength[b : b + 1024] @ D[b : b + 1024]
    if n < 2:
        return raw + 0.5
    k = max(1, int(np.floor(np.sqrt(n))))
    k = min(k, n - 1)
    return raw + 1.0 / (kth_neighbor_distance(F, k) + 2.0)


def _lex_min_row(S: np.ndarray) -> int:
    """Index of the lexicographically smallest row; ties go to the lowest index."""
    cand = np.arange(len(S))
    for col in range(S.shape[1]):
        vals = S[cand, col]
        cand = cand[vals == vals.min()]
        if len(cand) == 1:
            break
    return int(cand[0])


def truncation_order(F, n_remove: int) -> list[int]:
    """Rows of ``F`` removed by SPEA2 truncation, in removal order.

    Each step deletes the individual whose ascending distance list is
    lexicographically smallest, then drops it from every other list.
    """
    F = np.asarray(F, dtype=float)
    n = len(F)
    if n_remove < 0 or n_remove >= n:
        raise ValueError(f"cannot remove {n_remove} of {n} individuals")
    dist = cdist(F, F)
    np.fill_diagonal(dist, np.inf)
    alive = np.arange(n)
    S = np.sort(dist, axis=1)
    removed = []
    for _ in range(n_remove):
        pos = _lex_min_row(S)
        victim = alive[pos]
        removed.append(int(victim))
        keep = np.ones(len(alive), dtype=bool)
        keep[pos] = False
        alive = alive[keep]
        S = S[keep]
        # delete one copy of the distance to the victim from each remaining row
        gone = dist[alive, victim]
        hit = np.argmax(S == gone[:, None], axis=1)
        mask = np.ones(S.shape, dtype=bool)
        mask[np.arange(len(S)), hit] = False
        S = S[mask].reshape(len(S), -1)
    return removed


def truncate(pop: Population, target_n: int) -> Population:
    if target_n <= 0:
        raise ValueError("target_n must be positive")
    if len(pop) <= target_n:
        return pop
    gone = truncation_order(pop.F, len(pop) - target_n)
    keep = np.setdiff1d(np.arange(len(pop)), gone)
    return pop.take(keep)


def spea2_select(pop: Population, n: int, constrained: bool) -> tuple[Population, np.ndarray]:
    """Keep ``n`` individuals: all with fitness below 1, topped up by fitness or truncated."""
    fit = spea2_fitness(pop.F, pop.cv if constrained else None)
    chosen = fit < 1
    if chosen.sum() < n:
        chosen[:] = False
        chosen[np.argsort(fit, kind="stable")[:n]] = True
    elif chosen.sum() > n:
        idx = np.flatnonzero(chosen)
        gone = truncation_order(pop.F[idx], len(idx) - n)
        chosen[idx[gone]] = False
    idx = np.flatnonzero(chosen)
    idx = idx[np.argsort(fit[idx], kind="stable")]
    return pop.take(idx), fit[idx]


def fitness_tournament(fit, n: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.integers(0, len(fit), n)
    b = rng.integers(0, len(fit), n)
    return np.where(fit[b] < fit[a], b, a)


def run_ccmo(problem: Problem, config: RunConfig) -> RunResult:
    N = config.n
    half = max(1, N // 2)
    spec = problem.constraint_spec(config.delta)
    op = config.operator_for(problem)
    n_parents = 3 if op == "de" else 2
    s1, s2, s3 = np.random.SeedSequence(config.seed).spawn(3)
    rng = np.random.default_rng(s3)
    dtype = config.dtype

    def breed(pop, fit, gen):
        parents = fitness_tournament(fit, half * n_parents, rng).reshape(n_parents, half).T
        X = make_offspring(pop.X, parents, problem.lower, problem.upper, rng, op, config)
        return evaluate_or_fail(problem, X, gen, spec, dtype)

    clock = LoopClock()
    history = History(problem, config, clock)
    clock.start()
    pop1 = evaluate_or_fail(problem, random_population(problem, N, np.random.default_rng(s1)), 0, spec, dtype)
    pop2 = evaluate_or_fail(problem, random_population(problem, N, np.random.default_rng(s2)), 0, spec, dtype)
    fit1 = spea2_fitness(pop1.F, pop1.cv)
    fit2 = spea2_fitness(pop2.F)
    evals = 2 * N
    history.log(0, evals, pop1)
    stop = StopRule(config, 2 * half)
    gen = 0
    while stop.may_start(gen + 1, evals, clock.elapsed):
        off1 = breed(pop1, fit1, gen + 1)
        off2 = breed(pop2, fit2, gen + 1)
        next1, nfit1 = spea2_select(pop1.concat(off1, off2), N, constrained=True)
        next2, nfit2 = spea2_select(pop2.concat(off1, off2), N, constrained=False)
        wall = clock.elapsed
        if stop.overran(wall):
            break
        pop1, fit1, pop2, fit2 = next1, nfit1, next2, nfit2
        gen += 1
        evals += 2 * half
        history.log(gen, evals, pop1, wall=wall)
    clock.stop()
    history.log(gen, evals, pop1, final=True)
    return RunResult("CCMO", problem.name, config.seed, N, history.records, pop1, gen, evals, clock.elapsed,
                     extra={"pop2": pop2})
