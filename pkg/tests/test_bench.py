import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest
import yaml

from gmpea import RunConfig, get_problem, run
from gmpea.bench import AlgorithmSpec, ConfigError, ExperimentConfig, aggregate, emit_plotdata, rank_diagnostic
from gmpea.bench import run_experiment, scaling_study
from gmpea.bench.cli import main
from gmpea.bench.experiment import collect_runs, generation_ms, run_path
from gmpea.population import Population


def config(**kw):
    base = {"algorithms": ["GMPEA"], "problems": ["C1-DTLZ1"], "seeds": [0, 1, 2], "budget": {"evals": 400},
            "n": 20, "metrics": ["igd"], "settings": {"record_timing": False}}
    base.update(kw)
    return ExperimentConfig.from_dict(base)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


# ------------------------------------------------------------ configuration


def test_empty_seed_list_rejected():
    with pytest.raises(ConfigError, match="seed list is empty"):
        config(seeds=[])


def test_unknown_names_all_reported_up_front():
    with pytest.raises(ConfigError) as err:
        config(algorithms=["GMPEA", "MOEA/D"], problems=["ZDT1", "LIRCMOP3", "DTLZ9"])
    msg = str(err.value)
    assert "MOEA/D" in msg and "ZDT1" in msg and "DTLZ9" in msg and "LIRCMOP3'" not in msg


@pytest.mark.parametrize("budget", [{}, {"evals": 10, "seconds": 1}, {"evals": 0}, {"hours": 2}, 5])
def test_budget_needs_exactly_one_positive_kind(budget):
    with pytest.raises(ConfigError):
        config(budget=budget)


def test_unknown_keys_and_reference_rejected():
    with pytest.raises(ConfigError, match="unknown config keys"):
        config(colour="red")
    with pytest.raises(ConfigError, match="reference"):
        config(reference="CCMO")


def test_integer_seeds_mean_a_range():
    assert config(seeds=4).seeds == [0, 1, 2, 3]


def test_run_config_translation():
    cfg = config(algorithms=[{"name": "GMPEA-L", "base": "GMPEA", "t1": 20, "t2": 20}], budget={"seconds": 2},
                 operators={"DTLZ": "de"}, settings={"theta": 3.0})
    rc = cfg.run_config(cfg.algorithms[0], "C1-DTLZ1", 5, precision="float32")
    assert (rc.time_budget, rc.t1, rc.t2, rc.operator, rc.theta, rc.seed, rc.precision) == (
        2.0, 20, 20, "de", 3.0, 5, "float32")
    assert cfg.timed


def test_algorithm_spec_parse():
    assert AlgorithmSpec.parse("CCMO") == AlgorithmSpec("CCMO", "CCMO", {})
    with pytest.raises(ConfigError):
        AlgorithmSpec.parse({"base": "GMPEA"})


def test_shipped_configs_load():
    from pathlib import Path

    for path in sorted(Path(__file__).parent.parent.joinpath("configs").glob("*.yaml")):
        ExperimentConfig.from_yaml(path)


# ------------------------------------------------------------ experiments


def test_one_cell_three_seeds(tmp_path):
    # LIRCMOP5 starts out feasible, so every seed has a finite IGD
    csv_path = run_experiment(config(problems=["LIRCMOP5"]), out=tmp_path)
    files = sorted((tmp_path / "runs").rglob("*.jsonl"))
    assert [f.name for f in files] == ["seed0.jsonl", "seed1.jsonl", "seed2.jsonl"]
    rows = read_csv(csv_path.read_text())
    assert len(rows) == 1
    assert rows[0]["algorithm"] == "GMPEA" and rows[0]["n_seeds"] == "3"
    igd = [json.loads(f.read_text().splitlines()[-1])["igd"] for f in files]
    assert float(rows[0]["igd_mean"]) == pytest.approx(np.mean(igd), rel=1e-15)
    assert float(rows[0]["igd_std"]) == pytest.approx(np.std(igd, ddof=1), rel=1e-12)


def test_rerun_is_byte_identical(tmp_path):
    first = run_experiment(config(), out=tmp_path / "a").read_bytes()
    second = run_experiment(config(), out=tmp_path / "b").read_bytes()
    assert first == second
    for f in (tmp_path / "a").rglob("*.jsonl"):
        assert f.read_bytes() == (tmp_path / "b" / f.relative_to(tmp_path / "a")).read_bytes()


def test_parallel_workers_match_serial(tmp_path):
    serial = run_experiment(config(), out=tmp_path / "s").read_bytes()
    parallel = run_experiment(config(), out=tmp_path / "p", workers=2).read_bytes()
    assert serial == parallel


def test_reaggregation_is_stable(tmp_path):
    cfg = config(algorithms=["GMPEA", "c-NSGA-II"], seeds=5, reference="GMPEA", metrics=["igd", "hv"])
    text = run_experiment(cfg, out=tmp_path).read_text()
    again = aggregate(tmp_path, "GMPEA", ["GMPEA", "c-NSGA-II"], ["C1-DTLZ1"])
    assert text == again
    rows = {r["algorithm"]: r for r in read_csv(text)}
    assert rows["GMPEA"]["igd_wilcoxon_vs_GMPEA"] == ""
    assert rows["c-NSGA-II"]["igd_wilcoxon_vs_GMPEA"] in "+-="


def test_eval_budget_accounting(tmp_path):
    run_experiment(config(algorithms=["GMPEA", "c-NSGA-II", "CCMO"], seeds=[0], budget={"evals": 250}), out=tmp_path)
    runs = collect_runs(tmp_path)
    for (alg, _), seeds in runs.items():
        recs = seeds[0]
        per_gen = {"GMPEA": 40, "c-NSGA-II": 20, "CCMO": 20}[alg]
        assert recs[-1]["evals"] <= 250
        assert recs[-1]["evals"] == recs[0]["evals"] + per_gen * recs[-1]["gen"]
        assert recs[-1]["evals"] + per_gen > 250  # stopped only when the next generation would overrun


def test_wta_cells_leave_igd_blank(tmp_path):
    cfg = config(problems=["WTA-P1", "C1-DTLZ1"], seeds=[0], metrics=["igd", "hv"])
    rows = {r["problem"]: r for r in read_csv(run_experiment(cfg, out=tmp_path).read_text())}
    assert rows["WTA-P1"]["igd_mean"] == "" and rows["WTA-P1"]["hv_mean"] != ""
    assert rows["C1-DTLZ1"]["igd_mean"] != ""


def test_time_budget_cells_finish_before_deadline(tmp_path):
    cfg = config(budget={"seconds": 0.3}, seeds=[0], settings={})
    run_experiment(cfg, out=tmp_path, workers=4)
    recs = collect_runs(tmp_path)[("GMPEA", "C1-DTLZ1")][0]
    assert all(r["wall_ms"] <= 300 for r in recs) and recs[-1]["gen"] > 0


# ------------------------------------------------------------ plot data


def write_run(root, alg, prob, seed, recs):
    path = run_path(root, alg, prob, seed)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(json.dumps(r) + "\n" for r in recs))


def recs(*ratios):
    return [{"gen": g, "evals": 10 * g, "wall_ms": None, "feasible_ratio": r} for g, r in enumerate(ratios)]


def test_plotdata_single_run_has_zero_std(tmp_path):
    write_run(tmp_path, "GMPEA", "P", 0, recs(0.1, 0.5))
    rows = read_csv(emit_plotdata(collect_runs(tmp_path)))
    assert [r["std"] for r in rows] == ["0.0", "0.0"]
    assert [r["mean"] for r in rows] == ["0.1", "0.5"]


def test_plotdata_identical_runs(tmp_path):
    for s in (0, 1):
        write_run(tmp_path, "GMPEA", "P", s, recs(0.2, 0.4))
    rows = read_csv(emit_plotdata(collect_runs(tmp_path)))
    assert [(r["mean"], r["std"]) for r in rows] == [("0.2", "0.0"), ("0.4", "0.0")]


def test_plotdata_spot_cell(tmp_path):
    for s, ratios in enumerate([(0.1, 0.3), (0.2, 0.6), (0.6, 0.9)]):
        write_run(tmp_path, "CCMO", "P", s, recs(*ratios))
    rows = read_csv(emit_plotdata(collect_runs(tmp_path)))
    cell = next(r for r in rows if r["gen"] == "1")
    vals = [0.3, 0.6, 0.9]
    mean = sum(vals) / 3
    std = math.sqrt(sum((v - mean) ** 2 for v in vals) / 2)
    assert float(cell["mean"]) == pytest.approx(mean) and float(cell["std"]) == pytest.approx(std)


def test_plotdata_rejects_mixed_schemas(tmp_path):
    write_run(tmp_path, "GMPEA", "P", 0, recs(0.1))
    write_run(tmp_path, "GMPEA", "P", 1, [{"gen": 0, "evals": 0, "feasible_ratio": 0.1}])
    with pytest.raises(ValueError, match="mixed record schemas"):
        emit_plotdata(collect_runs(tmp_path))


# ------------------------------------------------------------ timing


def test_scaling_single_size():
    text = scaling_study([AlgorithmSpec("GMPEA", "GMPEA")], get_problem("C1-DTLZ1"), [100], generations=2)
    rows = read_csv(text)
    assert len(rows) == 1 and float(rows[0]["mean_gen_ms"]) > 0 and rows[0]["ratio_to_first"] == "1.0000"


def test_scaling_ratios_and_order():
    algs = [AlgorithmSpec("CCMO", "CCMO"), AlgorithmSpec("c-NSGA-II", "c-NSGA-II")]
    rows = read_csv(scaling_study(algs, get_problem("C1-DTLZ1"), [20, 60], generations=2))
    assert [r["n"] for r in rows] == ["20", "60", "20", "60"]
    assert all(float(r["mean_gen_ms"]) > 0 for r in rows)
    with pytest.raises(ValueError, match="ascending"):
        scaling_study(algs, get_problem("C1-DTLZ1"), [60, 20])


def test_generation_ms_excludes_initialization():
    assert generation_ms([{"gen": 0, "wall_ms": 50.0}, {"gen": 4, "wall_ms": 90.0}]) == 10.0
    with pytest.raises(ValueError):
        generation_ms([{"gen": 0, "wall_ms": 1.0}])


# ------------------------------------------------------------ rank diagnostic


def pop_from(F, cv):
    F = np.asarray(F, dtype=float)
    cv = np.asarray(cv, dtype=float)
    return Population(np.zeros((len(F), 1)), F, cv[:, None], cv)


def test_rankdiag_nondominated_feasible_set_has_one_rank():
    assert rank_diagnostic(pop_from([[0, 3], [1, 2], [3, 0]], [0, 0, 0])) == 1


def test_rankdiag_cv_chain_gives_n_ranks():
    n = 12
    F = np.random.default_rng(0).random((n, 2))
    assert rank_diagnostic(pop_from(F, np.arange(1.0, n + 1))) == n


def test_rankdiag_on_a_run():
    pop = run(get_problem("LIRCMOP1"), RunConfig(n=50, k_max=0, seed=0)).population
    assert rank_diagnostic(pop) >= 1


# ------------------------------------------------------------ CLI


def write_config(tmp_path, **kw):
    data = {"algorithms": ["GMPEA", "CCMO"], "problems": ["C1-DTLZ1"], "seeds": 2, "budget": {"generations": 2},
            "n": 20, "metrics": ["igd"], "settings": {"record_timing": False}, "out": str(tmp_path / "res"),
            "scaling": {"sizes": [20, 40], "generations": 2}, "rankdiag": {"problem": "LIRCMOP1", "n": 30, "seeds": [0]}}
    data.update(kw)
    path = tmp_path / "exp.yaml"
    path.write_text(yaml.safe_dump(data))
    return path


def test_cli_verbs(tmp_path, capsys):
    path = str(write_config(tmp_path))
    assert main(["run", "--config", path]) == 0
    assert (tmp_path / "res" / "results.csv").exists()
    assert main(["aggregate", "--config", path, "--reference", "GMPEA", "--out", str(tmp_path / "agg.csv")]) == 0
    assert "igd_wilcoxon_vs_GMPEA" in (tmp_path / "agg.csv").read_text()
    assert main(["plotdata", "--runs", str(tmp_path / "res"), "--out", str(tmp_path / "plot.csv")]) == 0
    assert read_csv((tmp_path / "plot.csv").read_text())[0]["metric"] == "feasible_ratio"
    assert main(["scale", "--config", path, "--out", str(tmp_path / "scale.csv")]) == 0
    assert len(read_csv((tmp_path / "scale.csv").read_text())) == 4
    capsys.readouterr()
    assert main(["rankdiag", "--config", path]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert rows[0]["problem"] == "LIRCMOP1" and rows[0]["n"] == "30"


def test_cli_config_error_exit_code(tmp_path, capsys):
    path = str(write_config(tmp_path, seeds=[]))
    assert main(["run", "--config", path]) == 2
    assert "seed list is empty" in capsys.readouterr().err
    assert main(["run"]) == 2


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "gmpea.bench", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "rankdiag" in out.stdout
