"""Benchmark problems: LIRCMOP1-14, C-DTLZ, DC-DTLZ and WTA scenarios P1-P10."""

from __future__ import annotations

import re

from .base import Problem, evaluate
from .dtlz import SUITE as DTLZ_SUITE
from .dtlz import ConstrainedDTLZ, make_dtlz
from .fronts import UnknownFrontError, pf_reference
from .lircmop import make_lircmop
from .wta import WTAInstance, WTAProblem, decode_wta, evaluate_wta, load_scenario

WTA_SCENARIOS = [f"P{i}" for i in range(1, 11)]


def problem_names() -> list[str]:
    return [f"LIRCMOP{i}" for i in range(1, 15)] + list(DTLZ_SUITE) + [f"WTA-{s}" for s in WTA_SCENARIOS]


def get_problem(name: str, d: int | None = None, **options) -> Problem:
    """Build a problem by name, e.g. ``LIRCMOP9``, ``C1-DTLZ1`` or ``WTA-P3``.

    ``d`` overrides the default decision dimension (30 for LIRCMOP, 7 for
    DTLZ1-based problems, 12 for the other DTLZ-based ones). WTA problems take
    an ``objective`` option ("printed" or "survival").
    """
    key = name.strip().upper()
    hit = re.fullmatch(r"LIRCMOP(\d+)", key)
    if hit:
        return make_lircmop(int(hit.group(1)), 30 if d is None else d)
    if key in DTLZ_SUITE:
        return make_dtlz(key, d=d, m=options.get("m", 3))
    hit = re.fullmatch(r"(?:WTA-)?(P\d+)", key)
    if hit:
        return WTAProblem(load_scenario(hit.group(1), options.get("objective")))
    raise ValueError(f"unknown problem {name!r}; known: {', '.join(problem_names())}")


__all__ = [
    "ConstrainedDTLZ",
    "Problem",
    "UnknownFrontError",
    "WTAInstance",
    "WTAProblem",
    "decode_wta",
    "evaluate",
    "evaluate_wta",
    "get_problem",
    "load_scenario",
    "pf_reference",
    "problem_names",
]
