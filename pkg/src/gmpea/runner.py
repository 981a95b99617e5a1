"""Run configuration, loop timing and per-generation history shared by all algorithms."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .metrics import metric_report
from .population import Population
from .problems.base import Problem

DE_SUITE_PREFIX = "LIRCMOP"


class RunError(RuntimeError):
    pass


@dataclass
class RunConfig:
    """Settings for one run of one algorithm on one problem.

    At least one stop rule (``k_max``, ``time_budget`` or ``max_evals``) must
    be set; with several, whichever binds first ends the run.
    ``operator=None`` picks DE for LIRCMOP problems and SBX+PM otherwise.
    """

    n: int = 100
    k_max: int | None = None
    time_budget: float | None = None
    max_evals: int | None = None
    seed: int = 0
    operator: str | None = None
    theta: float = 5.0
    delta: float = 1e-6
    t1: int = 5
    t2: int = 20
    eta_c: float = 20.0
    eta_m: float = 20.0
    pc: float = 1.0
    pm: float | None = None  # per-variable rate; None means 1/d
    de_f: float = 0.5
    de_cr: float = 1.0
    precision: str = "float64"
    record_timing: bool = True
    metric_every: int = 0  # 0: metrics only for the final generation
    metrics: tuple[str, ...] = ()  # subset of ("igd", "hv")
    igd_points: int = 1000
    hv_ideal: tuple[float, ...] | None = None
    hv_nadir: tuple[float, ...] | None = None
    problem: str | None = None

    def __post_init__(self):
        if self.k_max is None and self.time_budget is None and self.max_evals is None:
            raise ValueError("set at least one of k_max, time_budget, max_evals")
        if self.n < 2:
            raise ValueError("population size must be at least 2")
        if self.k_max is not None and self.k_max < 0:
            raise ValueError("k_max must be nonnegative")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive")
        if self.precision not in ("float64", "float32"):
            raise ValueError("precision must be float64 or float32")
        if self.operator not in (None, "sbx", "de"):
            raise ValueError("operator must be 'sbx' or 'de'")
        self.metrics = tuple(self.metrics)
        unknown = set(self.metrics) - {"igd", "hv"}
        if unknown:
            raise ValueError(f"unknown metrics {sorted(unknown)}")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        extra = set(data) - names
        if extra:
            raise ValueError(f"unknown run settings: {sorted(extra)}")
        return cls(**data)

    def as_dict(self) -> dict:
        return asdict(self)

    def operator_for(self, problem: Problem) -> str:
        if self.operator is not None:
            return self.operator
        return "de" if problem.name.upper().startswith(DE_SUITE_PREFIX) else "sbx"

    @property
    def dtype(self):
        return np.float32 if self.precision == "float32" else np.float64


class LoopClock:
    """Wall clock for the evolutionary loop; metric computation is paused out."""

    def __init__(self):
        self._elapsed = 0.0
        self._start = None

    def start(self):
        self._start = time.perf_counter()

    def stop(self):
        if self._start is not None:
            self._elapsed += time.perf_counter() - self._start
            self._start = None

    @property
    def running(self) -> bool:
        return self._start is not None

    @property
    def elapsed(self) -> float:
        running = time.perf_counter() - self._start if self._start is not None else 0.0
        return self._elapsed + running


@dataclass
class RunResult:
    algorithm: str
    problem: str
    seed: int
    n: int
    history: list[dict]
    population: Population
    generations: int
    evals: int
    loop_seconds: float
    extra: dict = field(default_factory=dict)

    def jsonl(self) -> str:
        return "".join(json.dumps(rec) + "\n" for rec in self.history)

    def write_jsonl(self, path) -> None:
        Path(path).write_text(self.jsonl())


def _clean(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


class History:
    """Collects one record per generation: gen, evals, wall_ms, feasible_ratio, igd?, hv?."""

    def __init__(self, problem: Problem, config: RunConfig, clock: LoopClock):
        self.problem = problem
        self.config = config
        self.clock = clock
        self.records: list[dict] = []
        self._ref = None
        self._bounds = None
        self._last_wall = 0.0
        if "igd" in config.metrics or "hv" in config.metrics:
            self._prepare_metrics()

    def _prepare_metrics(self):
        from .problems.fronts import UnknownFrontError, pf_reference

        cfg = self.config
        if "igd" in cfg.metrics:
            try:
                self._ref = pf_reference(self.problem, cfg.igd_points)
            except UnknownFrontError:
                self._ref = None  # no reference front: records carry no igd
        if "hv" in cfg.metrics:
            if cfg.hv_ideal is not None and cfg.hv_nadir is not None:
                self._bounds = (np.asarray(cfg.hv_ideal, float), np.asarray(cfg.hv_nadir, float))
            else:
                self._bounds = default_hv_bounds(self.problem)

    def log(self, gen: int, evals: int, pop: Population, final: bool = False, wall: float | None = None) -> dict:
        """Record generation ``gen``.

        ``wall`` defaults to the clock's reading; a final re-log of the same
        generation keeps the time at which that generation completed.
        """
        if wall is None:
            same = self.records and self.records[-1]["gen"] == gen
            wall = self._last_wall if final and same else self.clock.elapsed
        self._last_wall = wall
        was_running = self.clock.running
        self.clock.stop()
        rec = {
            "gen": gen,
            "evals": evals,
            "wall_ms": round(wall * 1000, 3) if self.config.record_timing else None,
            "feasible_ratio": pop.feasible_ratio(),
        }
        every = self.config.metric_every
        if self.config.metrics and (final or (every and gen % every == 0)):
            ideal, nadir = self._bounds if self._bounds is not None else (None, None)
            rep = metric_report(pop.F, pop.cv, self._ref, ideal, nadir)
            if "igd" in self.config.metrics and self._ref is not None:
                rec["igd"] = _clean(rep.igd)
            if "hv" in self.config.metrics:
                rec["hv"] = _clean(rep.hv)
        if self.records and self.records[-1]["gen"] == gen:
            self.records[-1] = rec
        else:
            self.records.append(rec)
        if was_running:
            self.clock.start()
        return rec


def default_hv_bounds(problem: Problem):
    """Ideal and nadir used to normalize HV: front extremes, or WTA objective ranges."""
    from .problems.fronts import pf_reference
    from .problems.wta import WTAProblem

    if isinstance(problem, WTAProblem):
        inst = problem.instance
        return np.zeros(2), np.array([float(inst.n_targets), float(sum(inst.capacity))])
    P = pf_reference(problem)
    lo, hi = P.min(axis=0), P.max(axis=0)
    hi = np.where(hi > lo, hi, lo + 1.0)
    return lo, hi


def random_population(problem: Problem, n: int, rng: np.random.Generator) -> np.ndarray:
    return problem.lower + rng.random((n, problem.d)) * (problem.upper - problem.lower)


def evaluate_or_fail(problem: Problem, X, gen: int, spec, dtype) -> Population:
    try:
        return Population.evaluate(problem, X, spec, dtype)
    except Exception as exc:
        raise RunError(f"evaluation failed at generation {gen}: {exc}") from exc


class StopRule:
    """Decides whether another generation may start or must be discarded."""

    def __init__(self, config: RunConfig, evals_per_gen: int):
        self.config = config
        self.per_gen = evals_per_gen

    def may_start(self, gen: int, evals: int, elapsed: float) -> bool:
        c = self.config
        if c.k_max is not None and gen > c.k_max:
            return False
        if c.max_evals is not None and evals + self.per_gen > c.max_evals:
            return False
        if c.time_budget is not None and elapsed >= c.time_budget:
            return False
        return True

    def overran(self, elapsed: float) -> bool:
        return self.config.time_budget is not None and elapsed > self.config.time_budget
