"""CDP vs Pareto front counts on first-generation populations (n=500, seeds 0..9).

LIRCMOP5 is the problem the rank-growth check names; LIRCMOP1 and C1-DTLZ1
are measured alongside because their random populations start infeasible.
"""

import csv
from pathlib import Path

from gmpea.bench.experiment import rank_study
from gmpea.problems import get_problem

OUT = Path(__file__).resolve().parent.parent / "measurements" / "rank_diagnostic.csv"


def main():
    fields = ["problem", "seed", "cdp_ranks", "pareto_ranks", "ratio", "feasible_ratio"]
    rows = []
    for name in ("LIRCMOP5", "LIRCMOP1", "C1-DTLZ1"):
        for r in rank_study(get_problem(name), 500, range(10)):
            rows.append({"problem": name, **r})
        sub = [r for r in rows if r["problem"] == name]
        cdp = sum(r["cdp_ranks"] for r in sub) / len(sub)
        par = sum(r["pareto_ranks"] for r in sub) / len(sub)
        print(f"{name}: mean CDP ranks {cdp:.1f}, mean Pareto ranks {par:.1f}, factor {cdp / par:.2f}")
    OUT.parent.mkdir(exist_ok=True)
    with OUT.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


if __name__ == "__main__":
    main()
