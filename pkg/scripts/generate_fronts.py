"""Regenerate the stored reference fronts (10,000 points each)."""

import argparse
import time

from gmpea.problems import get_problem, problem_names
from gmpea.problems.fronts import DEFAULT_POINTS, front_path, generate_front, write_front


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("problems", nargs="*", help="default: every problem with an analytic front")
    ap.add_argument("--points", type=int, default=DEFAULT_POINTS)
    args = ap.parse_args()
    names = args.problems or [n for n in problem_names() if not n.startswith("WTA")]
    for name in names:
        t0 = time.perf_counter()
        problem = get_problem(name)
        P = generate_front(problem, args.points)
        write_front(front_path(problem.name), problem.name, P)
        print(f"{name}: {len(P)} points in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
