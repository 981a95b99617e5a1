"""Running experiment matrices and turning run records into tables."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from ..algorithm import run as run_gmpea
from ..baselines.nsga2 import nds_cdp, nds_pareto
from ..metrics import wilcoxon_sign
from ..population import Population
from ..runner import RunConfig
from .config import ALGORITHMS, AlgorithmSpec, ExperimentConfig

HIGHER_IS_BETTER = {"hv": True, "feasible_ratio": True, "igd": False}
RUNS_DIR = "runs"
RESULTS_CSV = "results.csv"


def run_path(root: Path, algorithm: str, problem: str, seed: int) -> Path:
    return Path(root) / RUNS_DIR / algorithm / problem / f"seed{seed}.jsonl"


def _run_cell(cfg: ExperimentConfig, alg: AlgorithmSpec, problem: str, seed: int, root: Path, precision):
    result = ALGORITHMS[alg.base](cfg.problem(problem), cfg.run_config(alg, problem, seed, precision))
    path = run_path(root, alg.label, problem, seed)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(result.jsonl())
    return path


def run_experiment(cfg: ExperimentConfig, out=None, workers: int = 1, precision: str | None = None) -> Path:
    """Run every (algorithm, problem, seed) cell, write one JSONL each, then the results CSV.

    Cells run in worker processes when ``workers > 1``, except under a
    time budget, where they run one at a time so timings do not interfere.
    """
    root = cfg.out_dir(out)
    cells = [(a, p, s) for a in cfg.algorithms for p in cfg.problems for s in cfg.seeds]
    for a, p, s in cells:
        cfg.run_config(a, p, s, precision)  # surface setting errors before anything runs
    if workers > 1 and not cfg.timed:
        with ProcessPoolExecutor(workers) as pool:
            jobs = [pool.submit(_run_cell, cfg, a, p, s, root, precision) for a, p, s in cells]
            for job in jobs:
                job.result()
    else:
        for a, p, s in cells:
            _run_cell(cfg, a, p, s, root, precision)
    csv_path = root / RESULTS_CSV
    csv_path.write_text(aggregate(root, cfg.reference, [a.label for a in cfg.algorithms], cfg.problems))
    return csv_path


# ------------------------------------------------------------- aggregation


def read_records(path) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


def collect_runs(root) -> dict[tuple[str, str], dict[int, list[dict]]]:
    """``{(algorithm, problem): {seed: records}}`` from a results directory."""
    runs: dict = defaultdict(dict)
    for path in sorted(Path(root, RUNS_DIR).glob("*/*/seed*.jsonl")):
        seed = int(path.stem[len("seed"):])
        runs[(path.parent.parent.name, path.parent.name)][seed] = read_records(path)
    return dict(runs)


def _final_value(records: list[dict], metric: str) -> float:
    v = records[-1][metric]
    if v is None:
        # a null final metric means no feasible point was found
        return math.inf if metric == "igd" else 0.0
    return float(v)


def _fmt(x: float) -> str:
    return repr(float(x))


METRIC_ORDER = ("igd", "hv", "feasible_ratio")


def aggregate(root, reference: str | None = None, algorithms=None, problems=None) -> str:
    """Results table as CSV text, one row per (algorithm, problem).

    For each final metric the row holds mean, std and median over seeds and
    a Wilcoxon mark against ``reference``: '+' better, '-' worse, '=' no
    significant difference, empty for the reference itself or with fewer
    than five seeds.
    """
    runs = collect_runs(root)
    algorithms = algorithms or sorted({a for a, _ in runs})
    problems = problems or sorted({p for _, p in runs})
    present = {k for seeds in runs.values() for recs in seeds.values() for k in recs[-1]}
    metrics = [k for k in METRIC_ORDER if k in present]
    mark_col = "wilcoxon_vs_" + (reference or "none")
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["algorithm", "problem", "n_seeds"] + [f"{k}_{c}" for k in metrics for c in ("mean", "std", "median", mark_col)])
    for prob in problems:
        ref_seeds = runs.get((reference, prob)) if reference else None
        for alg in algorithms:
            seeds = runs.get((alg, prob))
            if not seeds:
                continue
            order = sorted(seeds)
            row = [alg, prob, len(order)]
            for metric in metrics:
                if any(metric not in seeds[s][-1] for s in order):
                    row += ["", "", "", ""]
                    continue
                vals = np.array([_final_value(seeds[s], metric) for s in order])
                mark = ""
                comparable = ref_seeds and all(metric in r[-1] for r in ref_seeds.values())
                if comparable and alg != reference and len(vals) >= 5 and len(ref_seeds) >= 5:
                    ref_vals = np.array([_final_value(ref_seeds[s], metric) for s in sorted(ref_seeds)])
                    mark = wilcoxon_sign(vals, ref_vals, lower_is_better=not HIGHER_IS_BETTER[metric])
                with np.errstate(invalid="ignore"):  # inf IGDs give a nan std
                    std = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
                row += [_fmt(np.mean(vals)), _fmt(std), _fmt(np.median(vals)), mark]
            w.writerow(row)
    return out.getvalue()


def final_values(root, algorithm: str, problem: str, metric: str) -> np.ndarray:
    seeds = collect_runs(root)[(algorithm, problem)]
    return np.array([_final_value(seeds[s], metric) for s in sorted(seeds)])


def emit_plotdata(runs: dict[tuple[str, str], dict[int, list[dict]]]) -> str:
    """Long-format convergence curves: one row per (algorithm, problem, gen, metric) with mean and std over seeds."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["algorithm", "problem", "gen", "metric", "mean", "std"])
    for (alg, prob) in sorted(runs):
        seeds = runs[(alg, prob)]
        schema = None
        by_gen: dict = defaultdict(lambda: defaultdict(list))
        for s in sorted(seeds):
            for rec in seeds[s]:
                keys = set(rec) - {"igd", "hv"}  # metrics appear only on metric generations
                if schema is None:
                    schema = keys
                elif keys != schema:
                    raise ValueError(f"mixed record schemas in {alg}/{prob}: {schema} vs {keys}")
                for metric in ("feasible_ratio", "igd", "hv", "wall_ms"):
                    if rec.get(metric) is not None:
                        by_gen[rec["gen"]][metric].append(float(rec[metric]))
        for gen in sorted(by_gen):
            for metric in ("feasible_ratio", "igd", "hv", "wall_ms"):
                vals = by_gen[gen].get(metric)
                if vals:
                    std = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
                    w.writerow([alg, prob, gen, metric, _fmt(np.mean(vals)), _fmt(std)])
    return out.getvalue()


# ------------------------------------------------------- timing experiments


def generation_ms(records: list[dict]) -> float:
    """Mean wall time per generation, initialization excluded."""
    first, last = records[0], records[-1]
    gens = last["gen"] - first["gen"]
    if gens <= 0:
        raise ValueError("need at least one completed generation to time")
    return (last["wall_ms"] - first["wall_ms"]) / gens


def scaling_study(algorithms: list[AlgorithmSpec], problem, sizes: list[int], generations: int = 5,
                  seeds=(0,), settings: dict | None = None) -> str:
    """CSV of mean per-generation wall time for each population size, with ratios to the smallest size.

    Runs execute one at a time.
    """
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise ValueError("sizes must be sorted ascending")
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["algorithm", "problem", "n", "generations", "mean_gen_ms", "ratio_to_first"])
    for alg in algorithms:
        base_ms = None
        for n in sizes:
            times = []
            for seed in seeds:
                data = {"n": n, "k_max": generations, "seed": seed, **(settings or {}), **alg.overrides,
                        "record_timing": True}
                res = ALGORITHMS[alg.base](problem, RunConfig.from_dict(data))
                times.append(generation_ms(res.history))
            ms = float(np.mean(times))
            base_ms = ms if base_ms is None else base_ms
            w.writerow([alg.label, problem.name, n, generations, f"{ms:.3f}", f"{ms / base_ms:.4f}"])
    return out.getvalue()


def rank_diagnostic(pop: Population) -> int:
    """Number of CDP fronts in an evaluated population."""
    if len(pop) == 0:
        return 0
    return int(nds_cdp(pop).max()) + 1


def rank_study(problem, n: int, seeds) -> list[dict]:
    """CDP vs plain Pareto front counts on GMPEA's seeded first-generation Pop1."""
    rows = []
    for seed in seeds:
        pop = run_gmpea(problem, RunConfig(n=n, k_max=0, seed=seed, record_timing=False)).population
        cdp = rank_diagnostic(pop)
        pareto = int(nds_pareto(pop.F).max()) + 1
        rows.append({"seed": seed, "cdp_ranks": cdp, "pareto_ranks": pareto, "ratio": cdp / pareto,
                     "feasible_ratio": pop.feasible_ratio()})
    return rows
