"""Write the WTA scenario files P1-P10.

Difficulty grows with the scenario index: more targets, more vehicles and
more strike slots per target, with tighter vehicle capacity relative to the
number of slots. Values are drawn once from a fixed seed and committed.
"""

import argparse
from pathlib import Path

import numpy as np
import yaml

OUT = Path(__file__).resolve().parents[1] / "src" / "gmpea" / "problems" / "data" / "wta"


def scenario(index: int, rng: np.random.Generator) -> dict:
    n_targets = 3 + 2 * index
    n_vehicles = 2 + index
    max_strikes = rng.integers(1, 2 + min(index, 3), size=n_targets).tolist()
    probabilities = [np.round(rng.uniform(0.35, 0.95, size=k), 2).tolist() for k in max_strikes]
    slots = sum(max_strikes)
    mean_cap = max(1, int(round(0.6 * slots / n_vehicles)))
    capacity = rng.integers(max(1, mean_cap - 1), mean_cap + 2, size=n_vehicles).tolist()
    return {
        "scenario": f"P{index}",
        "n_targets": n_targets,
        "n_vehicles": n_vehicles,
        "max_strikes": max_strikes,
        "capacity": capacity,
        "probabilities": probabilities,
        "objective": "printed",
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=OUT)
    ap.add_argument("--seed", type=int, default=20240613)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    for i in range(1, 11):
        data = scenario(i, rng)
        text = (
            f"# WTA scenario P{i}: {data['n_targets']} targets, {data['n_vehicles']} vehicles.\n"
            "# probabilities[i][k] is the interception probability of strike slot k on target i.\n"
            "# objective: printed | survival (see gmpea.problems.wta).\n"
        )
        text += yaml.safe_dump(data, sort_keys=False, default_flow_style=None)
        (args.out / f"P{i}.yaml").write_text(text)
        print(f"P{i}: genes={sum(data['max_strikes']) * data['n_vehicles']}")


if __name__ == "__main__":
    main()
