"""Decision-support analyses on top of the solver.

What-if edge tests (set, raise, lower or remove one edge and watch both
endpoints' betweenness), before/after shortest-path comparison for a
solution, and multi-budget sweeps that aggregate how often each node is
touched across independent solver runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .betweenness import PathSet, betweenness_all, shortest_paths_between
from .errors import NetboostError
from .graph import DistanceTransform, Network, NodeId, apply_edits
from .solver import Solution, SolverConfig, solve_co_mbi, validate_config


@dataclass
class WhatIfReport:
    a: NodeId
    b: NodeId
    old_weight: int  # 0 = no edge before
    new_weight: int  # 0 = edge removed
    b_a_before: float
    b_a_after: float
    b_b_before: float
    b_b_after: float


@dataclass
class SweepRun:
    budget: int
    solution: Solution | None
    error: str | None = None


@dataclass
class SweepReport:
    budgets: list[int]
    runs: list[SweepRun]
    frequency_table: dict[str, int] = field(default_factory=dict)


def what_if_edge(
    net: Network,
    a: NodeId,
    b: NodeId,
    new_weight: int,
    transform: DistanceTransform = DistanceTransform.RECIPROCAL,
) -> WhatIfReport:
    """Set the weight of {a,b} to new_weight (0 removes the edge, a missing
    edge is created) and report both nodes' betweenness before and after.

    Unlike the solver this may also *decrease* or delete a connection; the
    input network is never mutated.
    """
    net._check_node(a)
    net._check_node(b)
    if a == b:
        raise NetboostError("SAME_NODE", "the two nodes must differ")
    if new_weight < 0 or not isinstance(new_weight, int):
        raise NetboostError("NONPOSITIVE_WEIGHT", f"new weight must be an integer >= 0, got {new_weight}")

    old_weight = net.weight(a, b)
    before = betweenness_all(net, transform)
    if new_weight == old_weight:
        after = before
    else:
        key = (a, b) if a < b else (b, a)
        edges = [(u, v, w) for u, v, w in net.edges() if (u, v) != key]
        if new_weight > 0:
            edges.append((key[0], key[1], new_weight))
        after = betweenness_all(Network(net.labels(), edges), transform)
    return WhatIfReport(
        a=a,
        b=b,
        old_weight=old_weight,
        new_weight=new_weight,
        b_a_before=before[a],
        b_a_after=after[a],
        b_b_before=before[b],
        b_b_after=after[b],
    )


def paths_report(
    net: Network,
    solution: Solution | None,
    s: NodeId,
    t: NodeId,
    transform: DistanceTransform = DistanceTransform.RECIPROCAL,
    max_paths: int = 100,
) -> tuple[PathSet, PathSet | None]:
    """All shortest s-t paths on the original network and, when a solution
    is given, on the network with its edits applied."""
    before = shortest_paths_between(net, s, t, transform, max_paths)
    after = None
    if solution is not None:
        edited = apply_edits(net, solution.target, solution.edits)
        after = shortest_paths_between(edited, s, t, transform, max_paths)
    return before, after


def run_budget_sweep(
    net: Network,
    base_cfg: SolverConfig,
    budgets: list[int],
    progress_sink=None,
    cancel_flag=None,
    threads: int = 1,
) -> SweepReport:
    """Solve once per budget (same config otherwise, each run starting from
    the original network) and count, per node label, how many runs' edits
    touch that node.

    A failing run is recorded for its budget without aborting the sweep.
    """
    if not budgets:
        raise NetboostError("INVALID_CONFIG", "budgets must be non-empty")
    for b in budgets:
        if b < 1:
            raise NetboostError("INVALID_CONFIG", f"budget {b} must be >= 1")
    validate_config(net, base_cfg)

    runs: list[SweepRun] = []
    for i, budget in enumerate(budgets):
        if cancel_flag is not None and cancel_flag.is_set():
            break
        cfg = SolverConfig(
            target=base_cfg.target,
            budget=budget,
            mode=base_cfg.mode,
            opponents=base_cfg.opponents,
            opponent_strategy=base_cfg.opponent_strategy,
            forbidden=base_cfg.forbidden,
            p_imp=base_cfg.p_imp,
            degree_filter_percentile=base_cfg.degree_filter_percentile,
            max_edges=base_cfg.max_edges,
            use_binary_search=base_cfg.use_binary_search,
            delta=base_cfg.delta,
            transform=base_cfg.transform,
        )
        try:
            sol = solve_co_mbi(net, cfg, cancel_flag=cancel_flag, threads=threads)
            runs.append(SweepRun(budget=budget, solution=sol))
        except NetboostError as exc:
            runs.append(SweepRun(budget=budget, solution=None, error=str(exc)))
        if progress_sink is not None:
            progress_sink((i + 1) / len(budgets))

    return SweepReport(budgets=list(budgets), runs=runs, frequency_table=frequency_table(net, runs))


def frequency_table(net: Network, runs: list[SweepRun]) -> dict[str, int]:
    """Count, per label, the sweep runs whose solution edits touch the node."""
    counts: dict[str, int] = {}
    for run in runs:
        if run.solution is None:
            continue
        for e in run.solution.edits:
            label = net.label(e.node)
            counts[label] = counts.get(label, 0) + 1
    return counts
