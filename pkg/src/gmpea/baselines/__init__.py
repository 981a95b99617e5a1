from .ccmo import run_ccmo, spea2_fitness, spea2_select, truncate, truncation_order
from .nsga2 import crowding, nds_cdp, nds_pareto, run_cnsga2

__all__ = [
    "crowding",
    "nds_cdp",
    "nds_pareto",
    "run_ccmo",
    "run_cnsga2",
    "spea2_fitness",
    "spea2_select",
    "truncate",
    "truncation_order",
]
