"""Command line entry point: ``python -m gmpea.bench <verb> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from .config import AlgorithmSpec, ConfigError, ExperimentConfig
from .experiment import aggregate, collect_runs, emit_plotdata, rank_study, run_experiment, scaling_study


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)


def _load(args) -> ExperimentConfig:
    if args.config is None:
        raise ConfigError("--config is required for this verb")
    return ExperimentConfig.from_yaml(args.config)


def cmd_run(args) -> None:
    cfg = _load(args)
    path = run_experiment(cfg, out=args.out, workers=args.workers, precision=args.precision)
    print(path)


def cmd_scale(args) -> None:
    cfg = _load(args)
    sc = dict(cfg.scaling or {})
    if "sizes" not in sc:
        raise ConfigError("config needs a 'scaling' section with 'sizes'")
    labels = sc.get("algorithms")
    algs = [a for a in cfg.algorithms if labels is None or a.label in labels]
    settings = dict(cfg.settings)
    if args.precision:
        settings["precision"] = args.precision
    text = scaling_study(algs, cfg.problem(sc.get("problem", cfg.problems[0])), sc["sizes"],
                         generations=sc.get("generations", 5), seeds=sc.get("seeds", [0]), settings=settings)
    _write(text, args.out)


def cmd_aggregate(args) -> None:
    root = args.runs or _load(args).out_dir()
    _write(aggregate(root, args.reference), args.out)


def cmd_plotdata(args) -> None:
    root = args.runs or _load(args).out_dir()
    _write(emit_plotdata(collect_runs(root)), args.out)


def cmd_rankdiag(args) -> None:
    if args.config is not None:
        rd = dict(_load(args).rankdiag or {})
    else:
        rd = {}
    problem_name = args.problem or rd.get("problem", "LIRCMOP5")
    n = args.n or rd.get("n", 500)
    seeds = list(range(args.seeds)) if args.seeds else rd.get("seeds", list(range(10)))
    from ..problems import get_problem

    rows = rank_study(get_problem(problem_name), n, seeds)
    out = io.StringIO()
    w = csv.DictWriter(out, fieldnames=["problem", "n", "seed", "cdp_ranks", "pareto_ranks", "ratio", "feasible_ratio"],
                       lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({"problem": problem_name, "n": n, **r})
    _write(out.getvalue(), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gmpea-bench", description="Run and summarize benchmark experiments.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, runs=False):
        p.add_argument("--config", help="experiment YAML file")
        p.add_argument("--out", help="output directory (run) or file (other verbs; default stdout)")
        p.add_argument("--workers", type=int, default=1, help="parallel cells for evaluation-budget runs")
        p.add_argument("--precision", choices=["float64", "float32"], help="override stored-matrix precision")
        if runs:
            p.add_argument("--runs", help="results directory holding runs/ (default: the config's out)")
        return p

    common(sub.add_parser("run", help="run an experiment matrix")).set_defaults(func=cmd_run)
    common(sub.add_parser("scale", help="per-generation time vs population size")).set_defaults(func=cmd_scale)
    p = sub.add_parser("aggregate", help="rebuild the results CSV from run records")
    common(p, runs=True)
    p.add_argument("--reference", help="algorithm the Wilcoxon marks compare against")
    p.set_defaults(func=cmd_aggregate)
    p = sub.add_parser("plotdata", help="per-generation curves (mean and std over seeds)")
    common(p, runs=True)
    p.set_defaults(func=cmd_plotdata)
    p = sub.add_parser("rankdiag", help="CDP vs Pareto front counts on first-generation populations")
    common(p)
    p.add_argument("--problem")
    p.add_argument("--n", type=int)
    p.add_argument("--seeds", type=int, help="use seeds 0..SEEDS-1")
    p.set_defaults(func=cmd_rankdiag)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0
