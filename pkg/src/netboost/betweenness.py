"""Weighted betweenness centrality and shortest-path inspection.

b_v sums, over unordered node pairs {s,t} with s,t != v, the fraction of
shortest s-t paths that contain v. Disconnected pairs contribute 0, scores
are not normalized, and endpoints never credit themselves. The fast path is
Brandes' accumulation (ordered-pair sums halved once at this boundary); the
ground-truth oracle enumerates simple paths and is kept free of any code
shared with the fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ._engine import TIE_REL_TOL, CentralityEngine
from .errors import NetboostError
from .graph import DistanceTransform, EdgeEdit, Network, NodeId, apply_edits

ORACLE_MAX_NODES = 10


def lengths_equal(d1: float, d2: float) -> bool:
    """Tie rule for shortest-path lengths: |d1 - d2| <= 1e-12 * max(1, d1)."""
    return abs(d1 - d2) <= TIE_REL_TOL * max(1.0, d1)


@dataclass
class BetweennessScores:
    """Per-node weighted betweenness values (unordered-pair convention)."""

    values: dict[NodeId, float]

    def __getitem__(self, node: NodeId) -> float:
        return self.values[node]

    def top(self, k: int | None = None) -> list[tuple[NodeId, float]]:
        """Nodes sorted by descending score, ties by ascending id."""
        ranked = sorted(self.values.items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked if k is None else ranked[:k]


@dataclass
class PathSet:
    """All shortest paths between one node pair.

    ``distance`` is None when the pair is unreachable (then num_shortest is
    0 and paths is empty). ``paths`` lists node-id sequences in lexicographic
    order; when ``truncated`` the listing stopped at max_paths but
    num_shortest is still exact.
    """

    source: NodeId
    sink: NodeId
    distance: float | None
    num_shortest: int
    paths: list[list[NodeId]] = field(default_factory=list)
    truncated: bool = False


def betweenness_all(
    net: Network,
    transform: DistanceTransform = DistanceTransform.RECIPROCAL,
    threads: int = 1,
) -> BetweennessScores:
    """Exact weighted betweenness of every node (Brandes over all sources).

    Deterministic for a fixed input regardless of ``threads``: per-source
    partial scores are reduced in fixed source order.
    """
    engine = CentralityEngine(net, transform, threads=threads)
    ordered = engine.ordered_scores()
    return BetweennessScores({v: float(ordered[v]) / 2.0 for v in net.node_ids()})


def betweenness_bruteforce(
    net: Network,
    transform: DistanceTransform = DistanceTransform.RECIPROCAL,
) -> BetweennessScores:
    """Ground-truth oracle: exhaustive simple-path enumeration per pair.

    Guarded to small graphs; the solver and Brandes tests measure themselves
    against this.
    """
    n = net.n_nodes
    if n > ORACLE_MAX_NODES:
        raise NetboostError("TOO_LARGE_FOR_ORACLE", f"{n} nodes exceeds the {ORACLE_MAX_NODES}-node oracle guard")
    scores = {v: 0.0 for v in net.node_ids()}
    for s in net.node_ids():
        for t in range(s + 1, n + 1):
            paths = _all_simple_paths(net, s, t, transform)
            if not paths:
                continue
            d_min = min(length for _, length in paths)
            shortest = [p for p, length in paths if lengths_equal(d_min, length)]
            sigma = len(shortest)
            for v in net.node_ids():
                if v == s or v == t:
                    continue
                through = sum(1 for p in shortest if v in p)
                if through:
                    scores[v] += through / sigma
    return BetweennessScores(scores)


def _all_simple_paths(net: Network, s: NodeId, t: NodeId, transform: DistanceTransform):
    """Every simple s-t path with its total length (DFS)."""
    out: list[tuple[list[int], float]] = []
    stack = [(s, [s], 0.0)]
    while stack:
        node, path, length = stack.pop()
        if node == t:
            out.append((path, length))
            continue
        for nbr, w in net.adjacency(node).items():
            if nbr not in path:
                stack.append((nbr, path + [nbr], length + transform.length(w)))
    return out


def shortest_paths_between(
    net: Network,
    s: NodeId,
    t: NodeId,
    transform: DistanceTransform = DistanceTransform.RECIPROCAL,
    max_paths: int = 100,
) -> PathSet:
    """Distance, exact shortest-path count, and the paths themselves.

    Paths are reconstructed from the predecessor DAG in lexicographic
    node-id order and the listing stops after ``max_paths`` (num_shortest is
    exact either way).
    """
    net._check_node(s)
    net._check_node(t)
    if s == t:
        raise NetboostError("SAME_NODE", "source and sink must differ")
    if max_paths < 1:
        raise NetboostError("INVALID_CONFIG", "max_paths must be >= 1")

    engine = CentralityEngine(net, transform)
    dist, sigma, pred_start, pred_flat, pred_count = engine.sssp_with_paths(s)
    if not math.isfinite(dist[t]):
        return PathSet(source=s, sink=t, distance=None, num_shortest=0)

    num_shortest = int(round(sigma[t]))

    # nodes that lie on some s-t shortest path: backward closure of t's preds
    on_path = {t}
    frontier = [t]
    preds_of: dict[int, list[int]] = {}
    while frontier:
        w = frontier.pop()
        preds = [int(pred_flat[pred_start[w] + k]) for k in range(pred_count[w])]
        preds_of[w] = preds
        for p in preds:
            if p not in on_path:
                on_path.add(p)
                frontier.append(p)
    succ: dict[int, list[int]] = {v: [] for v in on_path}
    for w, preds in preds_of.items():
        for p in preds:
            succ[p].append(w)
    for v in succ:
        succ[v].sort()

    paths: list[list[int]] = []
    truncated = False

    def walk(node: int, acc: list[int]) -> bool:
        nonlocal truncated
        if node == t:
            paths.append(list(acc))
            if len(paths) >= max_paths and len(paths) < num_shortest:
                truncated = True
            return not truncated
        for nxt in succ[node]:
            acc.append(nxt)
            keep_going = walk(nxt, acc)
            acc.pop()
            if not keep_going:
                return False
        return True

    walk(s, [s])
    return PathSet(
        source=s,
        sink=t,
        distance=float(dist[t]),
        num_shortest=num_shortest,
        paths=paths,
        truncated=truncated,
    )


def recompute_after_edit(
    net: Network,
    target: NodeId,
    edit: EdgeEdit,
    transform: DistanceTransform = DistanceTransform.RECIPROCAL,
) -> BetweennessScores:
    """Scores of apply_edits(net, target, [edit]) for ALL nodes.

    Only the sources whose shortest-path structure can involve the edited
    edge are recomputed; everything else reuses the unedited accumulation.
    """
    apply_edits(net, target, [edit])  # validation (UNKNOWN_NODE, EDIT_TARGETS_SELF)
    engine = CentralityEngine(net, transform)
    new_weight = net.weight(target, edit.node) + edit.increment
    ordered = engine.probe_edit(target, edit.node, new_weight)
    return BetweennessScores({v: ordered[v] / 2.0 for v in net.node_ids()})
