"""netboost: improve the weighted betweenness centrality of a network node.

Core pieces: an immutable network model with Pajek NET I/O, weighted
betweenness centrality (exact and incrementally recomputed), the budgeted
greedy improvement solver with opponent/forbidden constraints, scenario
analyses (what-if edges, shortest-path comparison, budget sweeps), an HTTP
service for long-running jobs, and the ``netboost`` CLI.
"""

from .errors import NetboostError
from .graph import (
    DistanceTransform,
    EdgeEdit,
    Network,
    apply_edits,
    degree_percentile_threshold,
    parse_pajek,
    serialize_pajek,
    weighted_degree,
)
from .betweenness import (
    BetweennessScores,
    PathSet,
    betweenness_all,
    betweenness_bruteforce,
    recompute_after_edit,
    shortest_paths_between,
)
from .solver import (
    Mode,
    OpponentStrategy,
    Solution,
    SolverConfig,
    solve_co_mbi,
    solve_mbi_greedy,
)
from .scenario import SweepReport, WhatIfReport, paths_report, run_budget_sweep, what_if_edge

__all__ = [
    "NetboostError",
    "Network",
    "DistanceTransform",
    "EdgeEdit",
    "parse_pajek",
    "serialize_pajek",
    "apply_edits",
    "weighted_degree",
    "degree_percentile_threshold",
    "BetweennessScores",
    "PathSet",
    "betweenness_all",
    "betweenness_bruteforce",
    "shortest_paths_between",
    "recompute_after_edit",
    "Mode",
    "OpponentStrategy",
    "SolverConfig",
    "Solution",
    "solve_co_mbi",
    "solve_mbi_greedy",
    "WhatIfReport",
    "SweepReport",
    "what_if_edge",
    "paths_report",
    "run_budget_sweep",
]

__version__ = "0.1.0"
