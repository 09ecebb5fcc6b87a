"""Request parsing and response payloads shared by the HTTP service and CLI.

Node references in requests may be ids or exact labels; they are resolved
here, once, at the boundary. Payloads are plain dicts with deterministic
key and row ordering so that repeated reads of immutable resources are
byte-identical.
"""

from __future__ import annotations

from typing import Any

from .betweenness import BetweennessScores, PathSet
from .errors import NetboostError
from .graph import DistanceTransform, EdgeEdit, Network, weighted_degree
from .scenario import SweepReport, WhatIfReport
from .solver import (
    IterationRecord,
    Mode,
    OpponentReport,
    OpponentStrategy,
    Solution,
    SolverConfig,
    StrategyKind,
    TerminationReason,
)

_MODES = {m.value: m for m in Mode}
_TRANSFORMS = {t.value: t for t in DistanceTransform}


def resolve_node(net: Network, ref: Any) -> int:
    """Accept an id (int or numeric string) or an exact label."""
    if isinstance(ref, bool) or ref is None:
        raise NetboostError("UNKNOWN_NODE", f"bad node reference {ref!r}")
    if isinstance(ref, int):
        return net.resolve(ref)
    # numeric strings try the label first, so purely numeric labels still work
    text = str(ref)
    try:
        return net.resolve(text)
    except NetboostError:
        if text.isdigit():
            return net.resolve(int(text))
        raise


def parse_strategy(raw: Any) -> OpponentStrategy:
    """Strategy from either 'no-increment' / 'upper-bound:B' / 'delta:P' /
    'delta-ratio:R' strings or a {kind, ...} object."""
    if raw is None:
        return OpponentStrategy.no_increment()
    if isinstance(raw, OpponentStrategy):
        return raw
    if isinstance(raw, dict):
        kind = str(raw.get("kind", "no-increment"))
        if kind == StrategyKind.NO_INCREMENT.value:
            return OpponentStrategy.no_increment()
        if kind == StrategyKind.UPPER_BOUND.value:
            if "bound" not in raw:
                raise NetboostError("INVALID_CONFIG", "upper-bound strategy needs a bound")
            return OpponentStrategy.upper_bound(float(raw["bound"]))
        if kind == StrategyKind.DELTA.value:
            return OpponentStrategy.delta(float(raw.get("max_pct", 0.05)))
        if kind == StrategyKind.DELTA_RATIO.value:
            if "min_ratio" not in raw:
                raise NetboostError("INVALID_CONFIG", "delta-ratio strategy needs min_ratio")
            return OpponentStrategy.delta_ratio(float(raw["min_ratio"]))
        raise NetboostError("INVALID_CONFIG", f"unknown strategy kind {kind!r}")
    text = str(raw)
    name, _, arg = text.partition(":")
    try:
        if name == StrategyKind.NO_INCREMENT.value:
            return OpponentStrategy.no_increment()
        if name == StrategyKind.UPPER_BOUND.value:
            if not arg:
                raise NetboostError("INVALID_CONFIG", "upper-bound strategy needs a bound (upper-bound:B)")
            return OpponentStrategy.upper_bound(float(arg))
        if name == StrategyKind.DELTA.value:
            return OpponentStrategy.delta(float(arg) if arg else 0.05)
        if name == StrategyKind.DELTA_RATIO.value:
            if not arg:
                raise NetboostError("INVALID_CONFIG", "delta-ratio strategy needs a ratio (delta-ratio:R)")
            return OpponentStrategy.delta_ratio(float(arg))
    except ValueError:
        raise NetboostError("INVALID_CONFIG", f"bad strategy parameter in {text!r}") from None
    raise NetboostError("INVALID_CONFIG", f"unknown strategy {text!r}")


def parse_solver_config(net: Network, body: dict) -> SolverConfig:
    """SolverConfig from a request body; ids or labels accepted everywhere."""
    if "target" not in body:
        raise NetboostError("INVALID_CONFIG", "missing target")
    try:
        target = resolve_node(net, body["target"])
    except NetboostError as exc:
        raise NetboostError("UNKNOWN_TARGET", exc.message) from None
    if "budget" not in body:
        raise NetboostError("INVALID_CONFIG", "missing budget")
    try:
        budget = int(body["budget"])
    except (TypeError, ValueError):
        raise NetboostError("INVALID_CONFIG", f"bad budget {body['budget']!r}") from None

    mode_raw = str(body.get("mode", Mode.BOTH.value))
    if mode_raw not in _MODES:
        raise NetboostError("INVALID_CONFIG", f"unknown mode {mode_raw!r}")
    transform_raw = str(body.get("transform", DistanceTransform.RECIPROCAL.value))
    if transform_raw not in _TRANSFORMS:
        raise NetboostError("INVALID_CONFIG", f"unknown transform {transform_raw!r}")

    opponents = frozenset(resolve_node(net, x) for x in body.get("opponents", []))
    forbidden = frozenset(resolve_node(net, x) for x in body.get("forbidden", []))

    dfp = body.get("degree_filter_percentile")
    max_edges = body.get("max_edges")
    return SolverConfig(
        target=target,
        budget=budget,
        mode=_MODES[mode_raw],
        opponents=opponents,
        opponent_strategy=parse_strategy(body.get("strategy")),
        forbidden=forbidden,
        p_imp=float(body.get("p_imp", 0.01)),
        degree_filter_percentile=float(dfp) if dfp is not None else None,
        max_edges=int(max_edges) if max_edges is not None else None,
        use_binary_search=bool(body.get("use_binary_search", True)),
        delta=int(body.get("delta", 1)),
        transform=_TRANSFORMS[transform_raw],
    )


# -- payload builders ---------------------------------------------------------


def graph_payload(net: Network, scores: BetweennessScores | None = None) -> dict:
    nodes = []
    for node, label in net.nodes():
        entry: dict[str, Any] = {
            "id": node,
            "label": label,
            "weighted_degree": weighted_degree(net, node),
        }
        if scores is not None:
            entry["betweenness"] = scores[node]
        nodes.append(entry)
    edges = [{"u": u, "v": v, "weight": w} for u, v, w in net.edges()]
    return {"n_nodes": net.n_nodes, "n_edges": net.n_edges, "nodes": nodes, "edges": edges}


def solution_payload(net: Network, solution: Solution) -> dict:
    """Full machine-readable solution; edit rows carry the old/new weight so
    clients can show how each connection varied and what it cost."""
    edits = []
    for e in solution.edits:
        w_before = net.weight(solution.target, e.node)
        edits.append(
            {
                "node": e.node,
                "label": net.label(e.node),
                "increment": e.increment,
                "weight_before": w_before,
                "weight_after": w_before + e.increment,
            }
        )
    return {
        "target": solution.target,
        "target_label": net.label(solution.target),
        "budget": solution.budget,
        "cost": solution.cost,
        "target_before": solution.target_before,
        "target_after": solution.target_after,
        "edits": edits,
        "opponents": [
            {
                "node": r.node,
                "label": net.label(r.node),
                "before": r.before,
                "after": r.after,
                "pct_change": r.pct_change,
            }
            for r in solution.opponents_report
        ],
        "iterations": [
            {
                "node": it.node,
                "label": net.label(it.node),
                "increment": it.increment,
                "b_v": it.b_v,
                "candidates_evaluated": it.candidates_evaluated,
            }
            for it in solution.iterations
        ],
        "terminated_reason": solution.terminated_reason.value,
    }


def solution_from_payload(payload: dict) -> Solution:
    """Rebuild a Solution from its JSON payload (round-trip of
    solution_payload up to labels, which live in the network)."""
    return Solution(
        target=int(payload["target"]),
        budget=int(payload["budget"]),
        edits=[EdgeEdit(node=int(e["node"]), increment=int(e["increment"])) for e in payload["edits"]],
        cost=int(payload["cost"]),
        target_before=float(payload["target_before"]),
        target_after=float(payload["target_after"]),
        opponents_report=[
            OpponentReport(
                node=int(o["node"]),
                before=float(o["before"]),
                after=float(o["after"]),
                pct_change=None if o.get("pct_change") is None else float(o["pct_change"]),
            )
            for o in payload.get("opponents", [])
        ],
        iterations=[
            IterationRecord(
                node=int(i["node"]),
                increment=int(i["increment"]),
                b_v=float(i["b_v"]),
                candidates_evaluated=int(i["candidates_evaluated"]),
            )
            for i in payload.get("iterations", [])
        ],
        terminated_reason=TerminationReason(payload["terminated_reason"]),
    )


def sweep_payload(net: Network, report: SweepReport) -> dict:
    runs = []
    for run in report.runs:
        entry: dict[str, Any] = {"budget": run.budget}
        if run.solution is not None:
            entry["solution"] = solution_payload(net, run.solution)
        if run.error is not None:
            entry["error"] = run.error
        runs.append(entry)
    table = sorted(report.frequency_table.items(), key=lambda kv: (-kv[1], kv[0]))
    return {
        "budgets": report.budgets,
        "runs": runs,
        "frequency_table": [{"label": label, "count": count} for label, count in table],
    }


def pathset_payload(net: Network, ps: PathSet) -> dict:
    return {
        "source": ps.source,
        "source_label": net.label(ps.source),
        "sink": ps.sink,
        "sink_label": net.label(ps.sink),
        "distance": ps.distance,
        "reachable": ps.distance is not None,
        "num_shortest": ps.num_shortest,
        "paths": [[{"id": v, "label": net.label(v)} for v in p] for p in ps.paths],
        "truncated": ps.truncated,
    }


def whatif_payload(net: Network, rep: WhatIfReport) -> dict:
    return {
        "a": rep.a,
        "a_label": net.label(rep.a),
        "b": rep.b,
        "b_label": net.label(rep.b),
        "old_weight": rep.old_weight,
        "new_weight": rep.new_weight,
        "b_a_before": rep.b_a_before,
        "b_a_after": rep.b_a_after,
        "b_b_before": rep.b_b_before,
        "b_b_after": rep.b_b_after,
    }
