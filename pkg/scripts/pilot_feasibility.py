"""Pilot calibration for the C1-DTLZ1 feasibility check.

Runs GMPEA (d=7, m=3, n=105, 300 generations) on pilot seeds 1000..1019,
disjoint from the acceptance seeds, and writes the final feasible ratio of
Pop1 per seed.
"""

import csv
from pathlib import Path

from gmpea.algorithm import run
from gmpea.problems import get_problem
from gmpea.runner import RunConfig

OUT = Path(__file__).resolve().parent.parent / "measurements" / "pilot_feasibility_c1dtlz1.csv"


def main(seeds=range(1000, 1020)):
    problem = get_problem("C1-DTLZ1", d=7)
    rows = []
    for seed in seeds:
        res = run(problem, RunConfig(n=105, k_max=300, seed=seed, record_timing=False))
        rows.append({"seed": seed, "generations": res.generations, "feasible_ratio": res.population.feasible_ratio()})
    OUT.parent.mkdir(exist_ok=True)
    with OUT.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["seed", "generations", "feasible_ratio"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    ratios = [r["feasible_ratio"] for r in rows]
    print(f"min {min(ratios):.4f}  seeds >= 0.95: {sum(r >= 0.95 for r in ratios)}/{len(ratios)}")
    return rows


if __name__ == "__main__":
    main()
