"""Greedy budgeted improvement of a target node's betweenness.

Two solvers live here. ``solve_co_mbi`` spends an integer budget as weight
increments on edges incident to the target (new or existing), excluding
forbidden nodes and honoring opponent constraints; per candidate it binary
searches the smallest increment whose relative improvement clears ``p_imp``.
``solve_mbi_greedy`` is the classic baseline: k rounds, each adding the
single fixed-weight edge that maximizes the target's betweenness.

All candidate probes run against the current edited snapshot through the
incremental engine, and every probe yields all-node scores, so opponent
checks add no extra shortest-path work. Ties anywhere break by ascending
node id, which makes solutions deterministic regardless of how candidate
evaluations are scheduled.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._engine import CentralityEngine
from .betweenness import BetweennessScores
from .errors import NetboostError
from .graph import (
    DistanceTransform,
    EdgeEdit,
    Network,
    NodeId,
    apply_edits,
    degree_percentile_threshold,
    weighted_degree,
)

IMPROVE_EPS = 1e-9  # strict-improvement floor when the target starts at b_v = 0
OPPONENT_EPS = 1e-9


class Mode(enum.Enum):
    """Which edges the solver may touch."""

    CHANGE_WEIGHT = "change-weight"  # only edges to current neighbors
    NEW_CONNECTION = "new-connection"  # only edges to current non-neighbors
    BOTH = "both"


class StrategyKind(enum.Enum):
    NO_INCREMENT = "no-increment"
    UPPER_BOUND = "upper-bound"
    DELTA = "delta"
    DELTA_RATIO = "delta-ratio"


@dataclass(frozen=True)
class OpponentStrategy:
    """Tolerance policy for opponent betweenness growth.

    NO_INCREMENT forbids any increase; UPPER_BOUND caps the absolute
    increase; DELTA caps the percentage increase; DELTA_RATIO requires the
    target's growth to be at least ``min_ratio`` times the largest opponent
    growth.
    """

    kind: StrategyKind = StrategyKind.NO_INCREMENT
    bound: float = 0.0
    max_pct: float = 0.05
    min_ratio: float = 1.0

    def __post_init__(self) -> None:
        if self.bound < 0 or self.max_pct < 0:
            raise NetboostError("INVALID_CONFIG", "strategy parameters must be nonnegative")
        if self.min_ratio <= 0:
            raise NetboostError("INVALID_CONFIG", "delta-ratio requires min_ratio > 0")

    @classmethod
    def no_increment(cls) -> "OpponentStrategy":
        return cls(kind=StrategyKind.NO_INCREMENT)

    @classmethod
    def upper_bound(cls, bound: float) -> "OpponentStrategy":
        return cls(kind=StrategyKind.UPPER_BOUND, bound=bound)

    @classmethod
    def delta(cls, max_pct: float = 0.05) -> "OpponentStrategy":
        return cls(kind=StrategyKind.DELTA, max_pct=max_pct)

    @classmethod
    def delta_ratio(cls, min_ratio: float) -> "OpponentStrategy":
        return cls(kind=StrategyKind.DELTA_RATIO, min_ratio=min_ratio)


@dataclass(frozen=True)
class SolverConfig:
    target: NodeId
    budget: int
    mode: Mode = Mode.BOTH
    opponents: frozenset[NodeId] = frozenset()
    opponent_strategy: OpponentStrategy = OpponentStrategy()
    forbidden: frozenset[NodeId] = frozenset()
    p_imp: float = 0.01
    degree_filter_percentile: float | None = None
    max_edges: int | None = None
    use_binary_search: bool = True
    delta: int = 1
    transform: DistanceTransform = DistanceTransform.RECIPROCAL


class TerminationReason(enum.Enum):
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"
    NO_IMPROVING_CANDIDATE = "NO_IMPROVING_CANDIDATE"
    EDGE_CAP_REACHED = "EDGE_CAP_REACHED"
    CANCELLED = "CANCELLED"


@dataclass
class OpponentReport:
    node: NodeId
    before: float
    after: float
    pct_change: float | None  # None when before is 0 and after is not


@dataclass
class IterationRecord:
    node: NodeId
    increment: int
    b_v: float
    candidates_evaluated: int


@dataclass
class Solution:
    target: NodeId
    budget: int
    edits: list[EdgeEdit]
    cost: int
    target_before: float
    target_after: float
    opponents_report: list[OpponentReport]
    iterations: list[IterationRecord]
    terminated_reason: TerminationReason


@dataclass
class ProgressEvent:
    iteration: int
    cost: int
    budget: int
    b_v: float
    node: NodeId
    increment: int

    @property
    def fraction(self) -> float:
        return min(1.0, self.cost / self.budget)


@dataclass
class CandidateEvaluation:
    """Accepted probe for one candidate: the minimum accepted increment, the
    target betweenness it achieves and (when materialized) all-node scores."""

    node: NodeId
    increment: int
    b_v: float
    ordered: np.ndarray | None = field(default=None, repr=False)

    @property
    def scores(self) -> BetweennessScores | None:
        if self.ordered is None:
            return None
        return BetweennessScores({v: float(self.ordered[v]) / 2.0 for v in range(1, len(self.ordered))})


# -- config validation --------------------------------------------------------


def validate_config(net: Network, cfg: SolverConfig) -> None:
    if not net.has_node(cfg.target):
        raise NetboostError("UNKNOWN_TARGET", f"target node {cfg.target} not in network")
    if cfg.budget < 1:
        raise NetboostError("INVALID_CONFIG", f"budget must be >= 1, got {cfg.budget}")
    if not (0.0 < cfg.p_imp <= 1.0):
        raise NetboostError("INVALID_CONFIG", f"p_imp must be in (0, 1], got {cfg.p_imp}")
    if cfg.delta < 1:
        raise NetboostError("INVALID_CONFIG", f"delta must be >= 1, got {cfg.delta}")
    if cfg.max_edges is not None and cfg.max_edges < 1:
        raise NetboostError("INVALID_CONFIG", f"max_edges must be >= 1, got {cfg.max_edges}")
    if cfg.degree_filter_percentile is not None and not (0 <= cfg.degree_filter_percentile <= 100):
        raise NetboostError("INVALID_CONFIG", "degree filter percentile must be in [0, 100]")
    if cfg.target in cfg.forbidden:
        raise NetboostError("INVALID_CONFIG", "target cannot be forbidden")
    if cfg.target in cfg.opponents:
        raise NetboostError("INVALID_CONFIG", "target cannot be its own opponent")
    for node in list(cfg.forbidden) + list(cfg.opponents):
        if not net.has_node(node):
            raise NetboostError("INVALID_CONFIG", f"node {node} in opponents/forbidden not in network")


# -- operation: candidate_set --------------------------------------------------


def candidate_set(net: Network, cfg: SolverConfig, already_edited: set[NodeId] = frozenset()) -> set[NodeId]:
    """Nodes the solver may still connect to / strengthen in this round.

    Excludes the target, forbidden nodes and endpoints already edited; then
    applies the mode's adjacency rule and, for non-neighbors, the optional
    weighted-degree percentile filter.
    """
    nv = set(net.neighbors(cfg.target))
    threshold = None
    if cfg.degree_filter_percentile is not None:
        threshold = degree_percentile_threshold(net, cfg.degree_filter_percentile)
    out: set[NodeId] = set()
    for u in net.node_ids():
        if u == cfg.target or u in cfg.forbidden or u in already_edited:
            continue
        is_neighbor = u in nv
        if cfg.mode is Mode.CHANGE_WEIGHT and not is_neighbor:
            continue
        if cfg.mode is Mode.NEW_CONNECTION and is_neighbor:
            continue
        if not is_neighbor and threshold is not None and weighted_degree(net, u) < threshold:
            continue
        out.add(u)
    return out


# -- operation: check_opponents -------------------------------------------------


def check_opponents(
    before: dict[NodeId, float],
    after: dict[NodeId, float],
    target_growth: float,
    strategy: OpponentStrategy,
) -> bool:
    """True when every opponent's betweenness change is tolerable.

    ``before`` holds the ORIGINAL network's opponent scores (the CO-MBI
    condition compares against the unedited graph, not the previous
    iteration); ``target_growth`` is the target's cumulative growth from
    that same baseline.
    """
    if set(before) != set(after):
        raise NetboostError("MISMATCHED_OPPONENT_SETS", "before/after cover different opponents")
    kind = strategy.kind
    if kind is StrategyKind.NO_INCREMENT:
        return all(after[c] <= before[c] + OPPONENT_EPS for c in before)
    if kind is StrategyKind.UPPER_BOUND:
        return all(after[c] - before[c] <= strategy.bound for c in before)
    if kind is StrategyKind.DELTA:
        return all(after[c] <= before[c] * (1.0 + strategy.max_pct) + OPPONENT_EPS for c in before)
    # DELTA_RATIO: vacuously true when no opponent grows
    worst = max((after[c] - before[c] for c in before), default=0.0)
    return target_growth >= strategy.min_ratio * max(0.0, worst)


# -- operation: evaluate_candidate ----------------------------------------------


def _improves(b_v_base: float, b_v_new: float, p_imp: float) -> bool:
    if b_v_base <= 0.0:
        return b_v_new > IMPROVE_EPS
    return (b_v_new - b_v_base) >= p_imp * b_v_base


def _probe_ok(cfg: SolverConfig, orig_ordered: np.ndarray, b_v_cur: float, ordered: np.ndarray) -> tuple[bool, float]:
    b_new = float(ordered[cfg.target]) / 2.0
    if not _improves(b_v_cur, b_new, cfg.p_imp):
        return False, b_new
    if cfg.opponents:
        before = {c: float(orig_ordered[c]) / 2.0 for c in cfg.opponents}
        after = {c: float(ordered[c]) / 2.0 for c in cfg.opponents}
        growth = b_new - float(orig_ordered[cfg.target]) / 2.0
        if not check_opponents(before, after, growth, cfg.opponent_strategy):
            return False, b_new
    return True, b_new


def _probe_increment(
    engine: CentralityEngine,
    cfg: SolverConfig,
    orig_ordered: np.ndarray,
    b_v_cur: float,
    u: NodeId,
    w_now: int,
    inc: int,
) -> tuple[bool, float, np.ndarray | None]:
    """One probe of edit (u, +inc): (accepted, b'_v, all-node scores or None).

    The target-only pair formula answers the improvement threshold; the full
    per-source recomputation is paid only when an opponent check (or a graph
    beyond the pair-state size) requires all-node scores.
    """
    fast = engine.probe_bv(cfg.target, u, [inc])
    if fast is not None:
        b_new = fast[0]
        if not _improves(b_v_cur, b_new, cfg.p_imp):
            return False, b_new, None
        if not cfg.opponents:
            return True, b_new, None
        ordered = engine.probe_edit(cfg.target, u, w_now + inc)
        return (*_probe_ok(cfg, orig_ordered, b_v_cur, ordered), ordered)
    ordered = engine.probe_edit(cfg.target, u, w_now + inc)
    ok, b_new = _probe_ok(cfg, orig_ordered, b_v_cur, ordered)
    return ok, b_new, ordered


def _search_increment(
    engine: CentralityEngine,
    cfg: SolverConfig,
    u: NodeId,
    remaining: int,
    orig_ordered: np.ndarray,
) -> CandidateEvaluation | None:
    """Binary search (or whole-budget probe) for the smallest accepted
    increment on candidate u against the engine's snapshot."""
    base = engine.ordered_scores()
    b_v_cur = float(base[cfg.target]) / 2.0
    w_now = engine.net.weight(cfg.target, u)

    best: CandidateEvaluation | None = None
    if cfg.use_binary_search:
        # with several probes ahead and no opponent checks, one pair pass
        # yields every increment's exact b'_v up front; the bisection then
        # runs over those values with identical semantics
        vec = None
        if not cfg.opponents and remaining >= 4:
            vec = engine.probe_bv_all_increments(cfg.target, u, remaining)
        lo, hi = 1, remaining
        while lo <= hi:
            mid = (lo + hi) // 2
            if vec is not None:
                b_new = vec[mid - 1]
                ok, ordered = _improves(b_v_cur, b_new, cfg.p_imp), None
            else:
                ok, b_new, ordered = _probe_increment(engine, cfg, orig_ordered, b_v_cur, u, w_now, mid)
            if ok:
                best = CandidateEvaluation(node=u, increment=mid, b_v=b_new, ordered=ordered)
                hi = mid - 1
            else:
                lo = mid + 1
    else:
        ok, b_new, ordered = _probe_increment(engine, cfg, orig_ordered, b_v_cur, u, w_now, remaining)
        if ok:
            best = CandidateEvaluation(node=u, increment=remaining, b_v=b_new, ordered=ordered)
    return best


def evaluate_candidate(
    net: Network,
    cfg: SolverConfig,
    u: NodeId,
    remaining: int,
    engine: CentralityEngine | None = None,
    original_ordered: np.ndarray | None = None,
    materialize: bool = True,
) -> CandidateEvaluation | None:
    """Probe candidate u for the smallest accepted increment within the
    remaining budget.

    With binary search on, increments in [1, remaining] are probed assuming
    the target's betweenness is non-decreasing in the increment (lo=1,
    hi=remaining, accept moves hi down, reject moves lo up); otherwise a
    single probe spends the whole remaining budget. ``net`` is the current
    edited snapshot; ``original_ordered`` supplies the opponent baseline
    (defaults to the current snapshot's own scores). With ``materialize``
    the returned evaluation carries the edited graph's all-node scores.
    """
    if remaining < 1:
        return None
    if engine is None:
        engine = CentralityEngine(net, cfg.transform)
    orig = engine.ordered_scores() if original_ordered is None else original_ordered
    best = _search_increment(engine, cfg, u, remaining, orig)
    if best is not None and materialize and best.ordered is None:
        w_now = engine.net.weight(cfg.target, u)
        best.ordered = engine.probe_edit(cfg.target, u, w_now + best.increment)
    return best


# -- operation: select_best ------------------------------------------------------


def select_best(
    evaluations: list[CandidateEvaluation],
    b_v_current: float,
    p_imp: float,
) -> CandidateEvaluation | None:
    """Pick the round's winner among accepted candidates.

    Ascending-id scan keeping (u_best, w_best, b_best) and the running max:
    a candidate takes over when its score beats the incumbent by >= p_imp *
    b_best or matches it at a strictly smaller increment, or when it is
    within p_imp of the running maximum while strictly cheaper. Exact ties
    in (b_v, increment) keep the incumbent, so the lowest node id wins and
    the outcome cannot depend on evaluation scheduling.
    """
    b_max = b_best = b_v_current
    chosen: CandidateEvaluation | None = None
    w_best = 0
    for ev in sorted(evaluations, key=lambda e: e.node):
        if ev.b_v >= b_best:
            if ev.b_v > b_max:
                b_max = ev.b_v
            if (ev.b_v - b_best) >= p_imp * b_best or ev.increment < w_best:
                b_best, chosen, w_best = ev.b_v, ev, ev.increment
        else:
            if (b_max - ev.b_v) < p_imp * ev.b_v and ev.increment < w_best:
                b_best, chosen, w_best = ev.b_v, ev, ev.increment
    return chosen


# -- operation: solve_co_mbi -------------------------------------------------------


def _cancelled(cancel_flag) -> bool:
    return cancel_flag is not None and cancel_flag.is_set()


def solve_co_mbi(
    net: Network,
    cfg: SolverConfig,
    progress_sink=None,
    cancel_flag=None,
    threads: int = 1,
) -> Solution:
    """Greedy CO-MBI: repeatedly commit the best accepted candidate edit
    until the budget, candidates, or the edge cap run out.

    Opponent constraints are always checked against the ORIGINAL network's
    scores. Candidate evaluations within a round may run on ``threads``
    workers; the reduction is the fixed ascending-id scan, so results are
    identical for any thread count.
    """
    validate_config(net, cfg)
    engine = CentralityEngine(net, cfg.transform, threads=threads)
    orig_ordered = engine.ordered_scores()
    target = cfg.target

    current = net
    cur_ordered = orig_ordered
    edits: list[EdgeEdit] = []
    iterations: list[IterationRecord] = []
    cost = 0
    reason = TerminationReason.BUDGET_EXHAUSTED

    while True:
        if _cancelled(cancel_flag):
            reason = TerminationReason.CANCELLED
            break
        remaining = cfg.budget - cost
        if remaining < 1:
            reason = TerminationReason.BUDGET_EXHAUSTED
            break
        if cfg.max_edges is not None and len(edits) >= cfg.max_edges:
            reason = TerminationReason.EDGE_CAP_REACHED
            break

        cands = sorted(candidate_set(current, cfg, {e.node for e in edits}))
        accepted: list[CandidateEvaluation] = []
        if cands:

            def _eval(u: NodeId) -> CandidateEvaluation | None:
                if _cancelled(cancel_flag):
                    return None
                return _search_increment(engine, cfg, u, remaining, orig_ordered)

            if threads > 1 and len(cands) > 1:
                with ThreadPoolExecutor(max_workers=threads) as ex:
                    results = list(ex.map(_eval, cands))
            else:
                results = [_eval(u) for u in cands]
            accepted = [r for r in results if r is not None]

        if _cancelled(cancel_flag):
            reason = TerminationReason.CANCELLED
            break

        choice = select_best(accepted, float(cur_ordered[target]) / 2.0, cfg.p_imp)
        if choice is None:
            reason = TerminationReason.NO_IMPROVING_CANDIDATE
            break

        edit = EdgeEdit(node=choice.node, increment=choice.increment)
        edits.append(edit)
        cost += choice.increment
        w_new = current.weight(target, choice.node) + choice.increment
        ordered_new, pair = engine.commit_probe(target, choice.node, w_new)
        current = apply_edits(current, target, [edit])
        engine = CentralityEngine(
            current, cfg.transform, threads=threads, seed_ordered_scores=ordered_new, seed_pair=pair
        )
        cur_ordered = ordered_new
        iterations.append(
            IterationRecord(
                node=choice.node,
                increment=choice.increment,
                b_v=choice.b_v,
                candidates_evaluated=len(cands),
            )
        )
        if progress_sink is not None:
            progress_sink(
                ProgressEvent(
                    iteration=len(iterations),
                    cost=cost,
                    budget=cfg.budget,
                    b_v=choice.b_v,
                    node=choice.node,
                    increment=choice.increment,
                )
            )

    opponents_report = [
        _opponent_report(c, float(orig_ordered[c]) / 2.0, float(cur_ordered[c]) / 2.0)
        for c in sorted(cfg.opponents)
    ]
    return Solution(
        target=target,
        budget=cfg.budget,
        edits=edits,
        cost=cost,
        target_before=float(orig_ordered[target]) / 2.0,
        target_after=float(cur_ordered[target]) / 2.0,
        opponents_report=opponents_report,
        iterations=iterations,
        terminated_reason=reason,
    )


def _opponent_report(node: NodeId, before: float, after: float) -> OpponentReport:
    if before > 0:
        pct = (after - before) / before * 100.0
    elif after == before:
        pct = 0.0
    else:
        pct = None  # growth from zero has no percentage
    return OpponentReport(node=node, before=before, after=after, pct_change=pct)


# -- operation: solve_mbi_greedy -----------------------------------------------------


def solve_mbi_greedy(
    net: Network,
    target: NodeId,
    k: int,
    delta: int = 1,
    transform: DistanceTransform = DistanceTransform.RECIPROCAL,
    threads: int = 1,
) -> Solution:
    """Baseline greedy: k rounds, each adding the new edge (target, u) of
    fixed weight delta that maximizes the target's betweenness.

    No budget/opponent/forbidden machinery and no improvement threshold;
    ties break by ascending node id.
    """
    if not net.has_node(target):
        raise NetboostError("UNKNOWN_TARGET", f"target node {target} not in network")
    if k < 1:
        raise NetboostError("INVALID_CONFIG", f"k must be >= 1, got {k}")
    if delta < 1:
        raise NetboostError("INVALID_CONFIG", f"delta must be >= 1, got {delta}")

    engine = CentralityEngine(net, transform, threads=threads)
    orig_ordered = engine.ordered_scores()
    current = net
    cur_ordered = orig_ordered
    edits: list[EdgeEdit] = []
    iterations: list[IterationRecord] = []
    reason = TerminationReason.BUDGET_EXHAUSTED

    for _ in range(k):
        nv = set(current.neighbors(target))
        cands = [u for u in current.node_ids() if u != target and u not in nv]
        if not cands:
            reason = TerminationReason.NO_IMPROVING_CANDIDATE
            break
        best_u = None
        best_bv = -math.inf
        for u in cands:  # ascending id; strict > keeps the lowest id on ties
            fast = engine.probe_bv(target, u, [delta])
            bv = fast[0] if fast is not None else float(engine.probe_edit(target, u, delta)[target]) / 2.0
            if bv > best_bv:
                best_u, best_bv = u, bv
        edit = EdgeEdit(node=best_u, increment=delta)
        edits.append(edit)
        ordered_new, pair = engine.commit_probe(target, best_u, delta)
        current = apply_edits(current, target, [edit])
        engine = CentralityEngine(current, transform, threads=threads, seed_ordered_scores=ordered_new, seed_pair=pair)
        cur_ordered = ordered_new
        iterations.append(
            IterationRecord(node=best_u, increment=delta, b_v=best_bv, candidates_evaluated=len(cands))
        )

    return Solution(
        target=target,
        budget=k * delta,
        edits=edits,
        cost=sum(e.increment for e in edits),
        target_before=float(orig_ordered[target]) / 2.0,
        target_after=float(cur_ordered[target]) / 2.0,
        opponents_report=[],
        iterations=iterations,
        terminated_reason=reason,
    )


# -- solution revalidation ------------------------------------------------------------


def validate_solution(net: Network, cfg: SolverConfig, solution: Solution) -> None:
    """Re-check every Solution invariant against the original network.

    Raises INVALID_SOLUTION on any violation; the HTTP service runs this
    before storing a DONE payload.
    """

    def fail(msg: str) -> None:
        raise NetboostError("INVALID_SOLUTION", msg)

    if solution.cost != sum(e.increment for e in solution.edits):
        fail("cost does not equal the sum of increments")
    if solution.cost > cfg.budget:
        fail("cost exceeds budget")
    seen: set[NodeId] = set()
    nv = set(net.neighbors(cfg.target))
    for e in solution.edits:
        if e.node == cfg.target or e.node in cfg.forbidden:
            fail(f"edit endpoint {e.node} is forbidden or the target")
        if e.node in seen:
            fail(f"endpoint {e.node} edited twice")
        seen.add(e.node)
        if cfg.mode is Mode.CHANGE_WEIGHT and e.node not in nv:
            fail(f"CHANGE_WEIGHT edit on non-neighbor {e.node}")
        if cfg.mode is Mode.NEW_CONNECTION and e.node in nv:
            fail(f"NEW_CONNECTION edit on existing neighbor {e.node}")
    if solution.target_after < solution.target_before - 1e-12:
        fail("target betweenness decreased")
    prev = solution.target_before
    for it in solution.iterations:
        if it.b_v < prev - 1e-12:
            fail("b_v trace is not non-decreasing")
        prev = it.b_v
