from __future__ import annotations

import numpy as np

from gmpea.algorithm import build_neighborhoods
from gmpea.population import Population


def random_population(rng, n, m, d=3, n_con=2, discrete=False):
    """Population with random F and raw constraints; ``discrete`` forces many ties."""
    X = rng.random((n, d))
    if discrete:
        F = rng.integers(0, 4, (n, m)).astype(float) / 2
        C = rng.choice([-1.0, 0.0, 0.5, 1.0], size=(n, n_con))
    else:
        F = rng.random((n, m)) * 2
        C = rng.normal(size=(n, n_con)) * 0.3 - 0.1
    cv = np.maximum(0.0, C[:, 0])
    for k in range(1, n_con):
        cv = cv + np.maximum(0.0, C[:, k])
    return Population(X, F, C, cv)


def random_weights(rng, n, m):
    W = rng.random((n, m)) + 1e-3
    return W / W.sum(axis=1, keepdims=True)


def random_instance(rng, n=None, m=None):
    """Parents, offspring, weights, ideal point and topology for one selection call."""
    n = int(rng.integers(4, 33)) if n is None else n
    m = int(rng.choice([2, 3])) if m is None else m
    discrete = bool(rng.random() < 0.5)
    pop1, pop2, off1, off2 = (random_population(rng, n, m, discrete=discrete) for _ in range(4))
    if rng.random() < 0.3:
        # offspring that copy parents exercise exact CV/PBI ties
        idx = rng.integers(0, n, n)
        off1 = pop1.take(idx)
        off2 = pop2.take(rng.integers(0, n, n))
    W = random_weights(rng, n, m)
    z = rng.random(m) * 0.2 - 0.1
    t1 = int(rng.integers(1, n))
    t2 = int(rng.integers(t1 + 1, n + 1))
    topo = build_neighborhoods(W, t1, t2)
    return pop1, pop2, off1, off2, topo, W, z
