"""Experiment configuration: one YAML file describes a whole algorithm x problem x seed matrix."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..algorithm import run as run_gmpea
from ..baselines import run_ccmo, run_cnsga2
from ..problems import get_problem
from ..runner import RunConfig

ALGORITHMS = {"GMPEA": run_gmpea, "c-NSGA-II": run_cnsga2, "CCMO": run_ccmo}
BUDGET_KINDS = ("evals", "seconds", "generations")
SUITE_PREFIXES = ("LIRCMOP", "WTA", "DTLZ")


class ConfigError(ValueError):
    pass


def suite_of(problem: str) -> str:
    key = problem.upper()
    for prefix in ("LIRCMOP", "WTA"):
        if key.startswith(prefix):
            return prefix
    if key.startswith("P") and key[1:].isdigit():
        return "WTA"
    return "DTLZ"


@dataclass
class AlgorithmSpec:
    """A named algorithm: a base implementation plus run-setting overrides (e.g. neighborhood sizes)."""

    label: str
    base: str
    overrides: dict = field(default_factory=dict)

    @classmethod
    def parse(cls, entry) -> "AlgorithmSpec":
        if isinstance(entry, str):
            return cls(entry, entry)
        if not isinstance(entry, dict) or "name" not in entry:
            raise ConfigError(f"algorithm entry needs a name: {entry!r}")
        entry = dict(entry)
        label = entry.pop("name")
        base = entry.pop("base", label)
        return cls(label, base, entry)


@dataclass
class ExperimentConfig:
    algorithms: list[AlgorithmSpec]
    problems: list[str]
    seeds: list[int]
    budget_kind: str
    budget: float
    n: int = 100
    operators: dict = field(default_factory=dict)
    reference: str | None = None
    metrics: tuple[str, ...] = ("igd", "hv")
    out: str = "results"
    name: str = "experiment"
    settings: dict = field(default_factory=dict)
    problem_options: dict = field(default_factory=dict)
    scaling: dict | None = None
    rankdiag: dict | None = None

    def __post_init__(self):
        self.validate()

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        known = {"algorithms", "problems", "seeds", "budget", "n", "operators", "reference", "metrics", "out",
                 "name", "settings", "problem_options", "scaling", "rankdiag"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        budget = data.pop("budget", None)
        if not isinstance(budget, dict) or len(budget) != 1:
            raise ConfigError("budget must be a mapping with exactly one of: " + ", ".join(BUDGET_KINDS))
        (kind, value), = budget.items()
        seeds = data.pop("seeds", None)
        if isinstance(seeds, int):
            seeds = list(range(seeds))
        algorithms = [AlgorithmSpec.parse(a) for a in data.pop("algorithms", []) or []]
        return cls(algorithms=algorithms, problems=list(data.pop("problems", []) or []), seeds=list(seeds or []),
                   budget_kind=kind, budget=value, metrics=tuple(data.pop("metrics", ("igd", "hv"))), **data)

    @classmethod
    def from_yaml(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            data = yaml.safe_load(fh) or {}
        return cls.from_dict(data)

    def validate(self) -> None:
        problems = []
        if not self.algorithms:
            problems.append("no algorithms listed")
        if not self.problems:
            problems.append("no problems listed")
        if not self.seeds:
            problems.append("seed list is empty")
        if self.budget_kind not in BUDGET_KINDS:
            problems.append(f"unknown budget kind {self.budget_kind!r}")
        elif not (isinstance(self.budget, (int, float)) and self.budget > 0):
            problems.append("budget must be positive")
        labels = [a.label for a in self.algorithms]
        if len(set(labels)) != len(labels):
            problems.append("duplicate algorithm names")
        for a in self.algorithms:
            if a.base not in ALGORITHMS:
                problems.append(f"unknown algorithm {a.base!r} (known: {', '.join(ALGORITHMS)})")
        for name in self.problems:
            try:
                get_problem(name, **self.problem_options.get(name, {}))
            except (ValueError, FileNotFoundError) as exc:
                problems.append(str(exc))
        if self.reference is not None and self.reference not in labels:
            problems.append(f"reference algorithm {self.reference!r} is not in the algorithm list")
        for suite, op in self.operators.items():
            if suite not in SUITE_PREFIXES or op not in ("sbx", "de"):
                problems.append(f"bad operator entry {suite}: {op}")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def timed(self) -> bool:
        return self.budget_kind == "seconds"

    def problem(self, name: str):
        opts = dict(self.problem_options.get(name, {}))
        return get_problem(name, **opts)

    def run_config(self, algorithm: AlgorithmSpec, problem: str, seed: int, precision: str | None = None) -> RunConfig:
        data = {"n": self.n, "seed": seed, "metrics": self.metrics, "problem": problem}
        data[{"evals": "max_evals", "seconds": "time_budget", "generations": "k_max"}[self.budget_kind]] = (
            float(self.budget) if self.budget_kind == "seconds" else int(self.budget)
        )
        op = self.operators.get(suite_of(problem))
        if op is not None:
            data["operator"] = op
        data.update(self.settings)
        data.update(algorithm.overrides)
        if precision is not None:
            data["precision"] = precision
        return RunConfig.from_dict(data)

    def out_dir(self, override=None) -> Path:
        return Path(override if override is not None else self.out)
