"""Weapon-target assignment with a simplified constraint set.

A scenario has targets ``i``, each with ``max_strikes[i]`` strike slots, and
vehicles ``m`` with a per-vehicle capacity. One gene per (target, slot,
vehicle) triple, ordered target-major, then slot, then vehicle. Genes are
continuous in [0, 1] so every algorithm can use real-coded operators;
:func:`decode_wta` turns them into 0/1 assignments.

Objectives (both minimized):

* ``f1``: with ``objective="printed"`` the sum over targets of
  ``1 - prod_k (1 - p_ik * sum_m x_imk)``; with ``objective="survival"`` the
  expected number of surviving targets ``sum_i prod_k (1 - p_ik * sum_m x_imk)``.
* ``f2``: total number of assignments.

Constraints (``<= 0`` satisfied): at most one vehicle per strike slot, and
no vehicle over its capacity.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from ..batch import rowprod, rowsum
from .base import Problem

SCENARIO_DIR = Path(__file__).parent / "data" / "wta"


@dataclass(frozen=True)
class WTAInstance:
    scenario: str
    n_targets: int
    n_vehicles: int
    max_strikes: tuple[int, ...]
    probabilities: tuple[tuple[float, ...], ...]
    capacity: tuple[int, ...]
    objective: str = "printed"

    def __post_init__(self):
        if len(self.max_strikes) != self.n_targets or len(self.probabilities) != self.n_targets:
            raise ValueError("per-target tables must have n_targets entries")
        if len(self.capacity) != self.n_vehicles:
            raise ValueError("capacity must list every vehicle")
        for k, row in zip(self.max_strikes, self.probabilities):
            if k < 1 or len(row) != k:
                raise ValueError("each target needs one probability per strike slot")
            if any(not 0.0 <= p <= 1.0 for p in row):
                raise ValueError("probabilities must lie in [0, 1]")
        if any(c < 1 for c in self.capacity):
            raise ValueError("capacities must be at least 1")
        if self.objective not in ("printed", "survival"):
            raise ValueError("objective must be 'printed' or 'survival'")

    @property
    def n_slots(self) -> int:
        return sum(self.max_strikes)

    @property
    def n_genes(self) -> int:
        return self.n_slots * self.n_vehicles

    def slot_probabilities(self) -> np.ndarray:
        return np.array([p for row in self.probabilities for p in row], dtype=float)

    def slot_targets(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_targets), self.max_strikes)

    @classmethod
    def from_dict(cls, data: dict) -> "WTAInstance":
        return cls(
            scenario=str(data["scenario"]),
            n_targets=int(data["n_targets"]),
            n_vehicles=int(data["n_vehicles"]),
            max_strikes=tuple(int(v) for v in data["max_strikes"]),
            probabilities=tuple(tuple(float(p) for p in row) for row in data["probabilities"]),
            capacity=tuple(int(v) for v in data["capacity"]),
            objective=str(data.get("objective", "printed")),
        )


def load_scenario(scenario: str, objective: str | None = None) -> WTAInstance:
    path = Path(scenario)
    if not path.suffix:
        path = SCENARIO_DIR / f"{scenario}.yaml"
    if not path.exists():
        raise ValueError(f"unknown WTA scenario {scenario!r}")
    data = yaml.safe_load(path.read_text())
    if objective is not None:
        data["objective"] = objective
    return WTAInstance.from_dict(data)


def decode_wta(genes, inst: WTAInstance) -> np.ndarray:
    """Decode continuous genes into a 0/1 assignment of the same shape.

    A gene of at least 0.5 requests an assignment. Each vehicle honours its
    requests in decreasing gene value (lower gene index first on ties) until
    its capacity is used up. Accepts one row or an ``N x n_genes`` matrix.
    """
    genes = np.asarray(genes, dtype=float)
    single = genes.ndim == 1
    G = np.atleast_2d(genes)
    if G.shape[1] != inst.n_genes:
        raise ValueError(f"expected {inst.n_genes} genes, got {G.shape[1]}")
    N = G.shape[0]
    per_vehicle = G.reshape(N, inst.n_slots, inst.n_vehicles)
    out = np.zeros_like(per_vehicle, dtype=np.int8)
    for m, cap in enumerate(inst.capacity):
        col = per_vehicle[:, :, m]
        order = np.argsort(-col, axis=1, kind="stable")
        rank = np.empty_like(order)
        np.put_along_axis(rank, order, np.arange(inst.n_slots)[None, :].repeat(N, 0), axis=1)
        out[:, :, m] = ((col >= 0.5) & (rank < cap)).astype(np.int8)
    out = out.reshape(N, inst.n_genes)
    return out[0] if single else out


def evaluate_wta(inst: WTAInstance, assignment) -> tuple[np.ndarray, np.ndarray]:
    """Objectives ``(f1, f2)`` and constraint values for 0/1 assignments.

    ``assignment`` is a gene-ordered vector or an ``N x n_genes`` matrix.
    """
    A = np.atleast_2d(np.asarray(assignment))
    if A.shape[1] != inst.n_genes:
        raise ValueError(f"expected {inst.n_genes} assignment entries, got {A.shape[1]}")
    if np.any((A != 0) & (A != 1)):
        raise ValueError("assignment entries must be 0 or 1 after decoding")
    A = A.astype(float)
    N = A.shape[0]
    cube = A.reshape(N, inst.n_slots, inst.n_vehicles)
    per_slot = rowsum(cube)  # vehicles on each strike slot
    miss = 1 - inst.slot_probabilities()[None, :] * per_slot
    target_terms = []
    start = 0
    for k in inst.max_strikes:
        survive = rowprod(miss[:, start : start + k])
        target_terms.append(1 - survive if inst.objective == "printed" else survive)
        start += k
    f1 = rowsum(np.column_stack(target_terms))
    f2 = rowsum(A)
    per_vehicle = rowsum(np.swapaxes(cube, 1, 2))
    G = np.concatenate([per_slot - 1, per_vehicle - np.asarray(inst.capacity, dtype=float)[None, :]], axis=1)
    return np.column_stack([f1, f2]), G


class WTAProblem(Problem):
    encoding = "mixed-discrete"

    def __init__(self, inst: WTAInstance):
        self.instance = inst
        super().__init__(f"WTA-{inst.scenario}", inst.n_genes, 2, inst.n_slots + inst.n_vehicles)

    def _evaluate(self, X):
        return evaluate_wta(self.instance, decode_wta(X, self.instance))
