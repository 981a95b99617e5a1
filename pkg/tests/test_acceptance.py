"""End-to-end acceptance checks, one test per criterion.

Every test prints a ``PASS``/``FAIL`` line (repeated in the terminal summary)
before asserting. Criteria 9 and 10 do not hold at desk scale and are marked
as strict expected failures; the measurements behind that are in
``measurements/`` and the README.
"""

import itertools
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from gmpea import RunConfig, environmental_selection, get_problem, run
from gmpea.batch import heaviside, masked_select
from gmpea.bench import AlgorithmSpec, ExperimentConfig, run_experiment, scaling_study
from gmpea.bench.experiment import collect_runs, final_values, rank_study
from gmpea.metrics import hv, hv_monte_carlo, igd, wilcoxon_sign
from gmpea.scalarize import ConstraintSpec, cdp_better, cv_total, fpr_better, pbi, violation_per_constraint

from helpers import random_instance
from oracles import igd_oracle, selection_oracle

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def report(number, title, ok, detail=""):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def identical(a, b):
    return all(np.array_equal(getattr(a, k), getattr(b, k)) for k in ("X", "F", "C", "cv"))


def test_1_selection_matches_scalar_oracle():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(1000):
        pop1, pop2, off1, off2, topo, W, z = random_instance(rng)
        got = environmental_selection(pop1, pop2, off1, off2, topo, W, z)
        want = selection_oracle(pop1, pop2, off1, off2, topo.B1, topo.B2, W, z)
        mismatches += not (identical(got[0], want[0]) and identical(got[1], want[1]))
    elapsed = time.perf_counter() - start
    report(1, "batched selection is bit-identical to the scalar loop on 1000 instances",
           mismatches == 0 and elapsed < 60, f"{mismatches} mismatches, {elapsed:.1f} s")


def cdp_truth(cva, cvb, a_dominates):
    return (cva == 0 and cvb > 0) or (cva == 0 and cvb == 0 and a_dominates) or (0 < cva < cvb)


def test_2_scalarization_examples_and_truth_tables():
    w, z = np.array([1.0, 0.0]), np.zeros(2)
    pbi_ok = (abs(pbi(z, w, z)) <= 1e-12 and abs(pbi([2.0, 0.0], w, z, 5.0) - 2) <= 1e-12
              and abs(pbi([0.0, 1.0], w, z, 5.0) - 5) <= 1e-12)
    spec = ConstraintSpec(2, 1, 1e-6)
    cv_ok = (violation_per_constraint([0.5, -1.0], [1e-7], spec).tolist() == [0.5, 0.0, 0.0]
             and cv_total([0.5, -1.0], [1e-7], spec) == 0.5
             and cv_total([0.2, 0.3], [], ConstraintSpec(2, 0)) == 0.5
             and cv_total([-1.0, -2.0], [], ConstraintSpec(2, 0)) == 0.0)
    # objective pairs: a dominates b, b dominates a, equal, incomparable
    pairs = [([1, 1], [2, 2], True), ([2, 2], [1, 1], False), ([1, 1], [1, 1], False), ([1, 3], [2, 2], False)]
    cvs = [0.0, 0.2, 0.5]
    bad = []
    for (fa, fb, dom), cva, cvb in itertools.product(pairs, cvs, cvs):
        if cdp_better(fa, cva, fb, cvb) != cdp_truth(cva, cvb, dom):
            bad.append(("cdp", fa, fb, cva, cvb))
    for ga, gb, cva, cvb in itertools.product([1.0, 2.0], [1.0, 2.0], cvs, cvs):
        want = ga < gb if cva == cvb else cva < cvb
        if fpr_better(ga, cva, gb, cvb) != want:
            bad.append(("fpr", ga, gb, cva, cvb))
    report(2, "PBI, CV, CDP and FPR", pbi_ok and cv_ok and not bad,
           f"pbi {pbi_ok}, cv {cv_ok}, {len(bad)} truth-table mismatches")


def test_3_mask_semantics():
    ok = heaviside([0.0]).tolist() == [1] and heaviside([-0.5]).tolist() == [0]
    ok &= heaviside([-1.0, 0.0, 2.0]).tolist() == [0, 1, 1]
    bad = 0
    for n in range(1, 6):
        a = np.arange(n * 2, dtype=float).reshape(n, 2)
        b = -a - 1
        for mask in itertools.product([0, 1], repeat=n):
            want = np.array([a[i] if mask[i] else b[i] for i in range(n)])
            bad += not np.array_equal(masked_select(np.array(mask), a, b), want)
    rng = np.random.default_rng(3)
    for _ in range(10_000):
        n = int(rng.integers(1, 8))
        cond = rng.integers(0, 2, n)
        a, b = rng.normal(size=(n, 3)), rng.normal(size=(n, 3))
        want = np.array([a[i] if cond[i] == 1 else b[i] for i in range(n)])
        bad += not np.array_equal(masked_select(cond, a, b), want)
    report(3, "masked_select equals branching; H(0) = 1", ok and bad == 0, f"{bad} mismatches")


def test_4_metrics():
    rng = np.random.default_rng(4)
    R = rng.random((30, 2))
    self_zero = igd(R, R) == 0.0
    worst = 0.0
    for _ in range(100):
        m = int(rng.integers(2, 4))
        P, Q = rng.random((int(rng.integers(1, 30)), m)), rng.random((int(rng.integers(1, 60)), m))
        worst = max(worst, abs(igd(P, Q) - igd_oracle(P, Q)))
    hv_exact = hv([[1.0, 2.0], [2.0, 1.0]], [3.0, 3.0]) == 3.0
    rel = []
    for m in (2, 3):
        Q = rng.random((40, m))
        Q /= np.linalg.norm(Q, axis=1, keepdims=True)
        ref = np.full(m, 1.1)
        rel.append(abs(hv_monte_carlo(Q, ref) - hv(Q, ref)) / hv(Q, ref))
    report(4, "IGD and HV", self_zero and worst <= 1e-12 and hv_exact and max(rel) < 0.01,
           f"igd max err {worst:.1e}, MC rel err {max(rel):.2e}")


def test_5_determinism(tmp_path):
    data = {"algorithms": ["GMPEA", "c-NSGA-II", "CCMO"], "problems": ["LIRCMOP2", "C1-DTLZ1"], "seeds": [0, 1],
            "budget": {"generations": 10}, "n": 30, "metrics": ["igd", "hv"], "settings": {"record_timing": False}}
    cfg = ExperimentConfig.from_dict(data)
    first = run_experiment(cfg, out=tmp_path / "a")
    second = run_experiment(cfg, out=tmp_path / "b")
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    same = all((tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes() for f in files)
    report(5, "identical config and seeds give byte-identical records and CSV",
           same and first.read_bytes() == second.read_bytes() and len(files) == 13, f"{len(files)} files compared")


def test_6_lircmop9_fixed_time(tmp_path):
    cfg = ExperimentConfig.from_yaml(CONFIGS / "lircmop9_desk.yaml")
    start = time.perf_counter()
    run_experiment(cfg, out=tmp_path)
    elapsed = time.perf_counter() - start
    vals = {a: final_values(tmp_path, a, "LIRCMOP9", "igd") for a in ("GMPEA", "c-NSGA-II", "CCMO")}
    med = {a: float(np.median(v)) for a, v in vals.items()}
    marks = {a: wilcoxon_sign(vals["GMPEA"], vals[a]) for a in ("c-NSGA-II", "CCMO")}
    ok = all(med["GMPEA"] < med[a] and marks[a] == "+" for a in marks) and elapsed < 120
    detail = ", ".join(f"{a} {m:.4f}" for a, m in med.items()) + f"; marks {marks}; {elapsed:.0f} s"
    report(6, "GMPEA has the lowest median IGD on LIRCMOP9 in 2 s, significantly", ok, detail)


def test_7_c1_dtlz1_feasibility():
    problem = get_problem("C1-DTLZ1", d=7)
    ratios = [run(problem, RunConfig(n=105, k_max=300, seed=s, record_timing=False)).population.feasible_ratio()
              for s in range(20)]
    hits = sum(r >= 0.95 for r in ratios)
    report(7, "C1-DTLZ1 final Pop1 at least 95% feasible in 18 of 20 seeds", hits >= 18,
           f"{hits}/20, min {min(ratios):.3f}")


def test_8_scaling_ratio():
    algs = [AlgorithmSpec("GMPEA", "GMPEA"), AlgorithmSpec("CCMO", "CCMO")]
    text = scaling_study(algs, get_problem("C1-DTLZ1"), [1000, 5000], generations=2)
    ratio = {}
    for line in text.splitlines()[1:]:
        alg, _, n, _, _, r = line.split(",")
        if n == "5000":
            ratio[alg] = float(r)
    report(8, "GMPEA time ratio n=5000/n=1000 below CCMO's", ratio["GMPEA"] < ratio["CCMO"],
           f"GMPEA x{ratio['GMPEA']:.2f}, CCMO x{ratio['CCMO']:.2f}")


@pytest.mark.xfail(strict=True, reason="random LIRCMOP5 populations are fully feasible, so CDP and Pareto ranks coincide")
def test_9_rank_explosion_on_lircmop5():
    rows = rank_study(get_problem("LIRCMOP5"), 500, range(10))
    cdp = np.mean([r["cdp_ranks"] for r in rows])
    pareto = np.mean([r["pareto_ranks"] for r in rows])
    feas = np.mean([r["feasible_ratio"] for r in rows])
    report(9, "CDP rank count at least 2x the unconstrained count on LIRCMOP5", cdp >= 2 * pareto,
           f"{cdp:.1f} vs {pareto:.1f} ranks, factor {cdp / pareto:.2f}, feasible share {feas:.2f}")


@pytest.mark.xfail(strict=True, reason="at 200 generations the both-large neighborhood variant converges faster")
def test_10_neighborhood_ablation(tmp_path):
    cfg = ExperimentConfig.from_yaml(CONFIGS / "ablation_lircmop13.yaml")
    run_experiment(cfg, out=tmp_path)
    runs = collect_runs(tmp_path)
    assert {a for a, _ in runs} == {"GMPEA", "GMPEA-S", "GMPEA-L"}
    med = {a: float(np.median(final_values(tmp_path, a, "LIRCMOP13", "igd"))) for a in ("GMPEA", "GMPEA-S", "GMPEA-L")}
    report(10, "default GMPEA median IGD no worse than GMPEA-S and GMPEA-L on LIRCMOP13",
           med["GMPEA"] <= med["GMPEA-S"] and med["GMPEA"] <= med["GMPEA-L"],
           ", ".join(f"{a} {m:.4f}" for a, m in med.items()))
