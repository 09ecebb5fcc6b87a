"""Immutable weighted network model, Pajek NET I/O and edit application.

A :class:`Network` is an undirected graph with 1-based contiguous node ids,
unique labels, and positive integer co-occurrence weights. Edges are stored
canonically with ``u < v``; a weight-0 pair is simply absent. Instances are
immutable after construction, so they can be shared freely across threads;
every mutating operation returns a new value.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import NetboostError

NodeId = int

_VERTICES_RE = re.compile(r"^\*vertices\s+(\d+)\s*$", re.IGNORECASE)
_SECTION_RE = re.compile(r"^\*(\w+)", re.IGNORECASE)
_QUOTED_LABEL_RE = re.compile(r'^(\d+)\s+"([^"]*)"\s*$')


class DistanceTransform(enum.Enum):
    """Mapping from stored co-occurrence weight to shortest-path edge length.

    RECIPROCAL reads weights as tie strength (length ``1/w``), so increasing a
    weight shortens the edge and can raise betweenness; IDENTITY reads weights
    as lengths directly. Both yield strictly positive finite lengths for
    weights >= 1.
    """

    RECIPROCAL = "reciprocal"
    IDENTITY = "identity"

    def length(self, weight: int) -> float:
        if self is DistanceTransform.RECIPROCAL:
            return 1.0 / weight
        return float(weight)


@dataclass(frozen=True)
class EdgeEdit:
    """A weight increment on the edge between the solver target and ``node``.

    If the edge does not exist yet it is created with weight ``increment``.
    """

    node: NodeId
    increment: int

    def __post_init__(self) -> None:
        if self.increment < 1:
            raise NetboostError(
                "NONPOSITIVE_INCREMENT",
                f"edit increment must be >= 1, got {self.increment}",
            )


class Network:
    """Immutable undirected graph with labeled nodes and integer weights.

    Node ids are contiguous ``1..n``; labels are unique and must not contain
    double quotes or newlines (so Pajek serialization round-trips).
    """

    __slots__ = ("_labels", "_edges", "_adj", "_by_label")

    def __init__(self, labels: Sequence[str], edges: Iterable[tuple[int, int, int]] = ()):
        labels = tuple(str(x) for x in labels)
        n = len(labels)
        by_label: dict[str, int] = {}
        for i, lab in enumerate(labels, start=1):
            # reject quotes and anything splitlines() treats as a line break,
            # otherwise the Pajek round-trip cannot hold
            if '"' in lab or len(lab.splitlines()) != 1:
                raise NetboostError("INVALID_LABEL", f"label {lab!r} contains a quote or line break")
            if lab in by_label:
                raise NetboostError("DUPLICATE_LABEL", f"label {lab!r} used by nodes {by_label[lab]} and {i}")
            by_label[lab] = i

        edge_map: dict[tuple[int, int], int] = {}
        adj: list[dict[int, int]] = [dict() for _ in range(n + 1)]
        for u, v, w in edges:
            if not (1 <= u <= n) or not (1 <= v <= n):
                raise NetboostError("OUT_OF_RANGE_NODE_ID", f"edge ({u},{v}) references a node outside 1..{n}")
            if u == v:
                raise NetboostError("SELF_LOOP", f"self-loop on node {u}")
            if not isinstance(w, int) or isinstance(w, bool):
                raise NetboostError("NON_INTEGER_WEIGHT", f"edge ({u},{v}) weight {w!r} is not an integer")
            if w < 1:
                raise NetboostError("NONPOSITIVE_WEIGHT", f"edge ({u},{v}) weight {w} must be >= 1")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in edge_map:
                raise NetboostError("DUPLICATE_EDGE", f"edge ({a},{b}) listed twice")
            edge_map[(a, b)] = w
            adj[u][v] = w
            adj[v][u] = w

        object.__setattr__(self, "_labels", labels)
        object.__setattr__(self, "_edges", edge_map)
        object.__setattr__(self, "_adj", tuple(adj))
        object.__setattr__(self, "_by_label", by_label)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Network is immutable")

    # -- basic accessors ----------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self._labels)

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    def node_ids(self) -> range:
        return range(1, self.n_nodes + 1)

    def label(self, node: NodeId) -> str:
        self._check_node(node)
        return self._labels[node - 1]

    def labels(self) -> tuple[str, ...]:
        return self._labels

    def nodes(self) -> list[tuple[NodeId, str]]:
        return list(enumerate(self._labels, start=1))

    def edges(self) -> Iterator[tuple[NodeId, NodeId, int]]:
        """Canonical edge triples (u < v), sorted."""
        for (u, v) in sorted(self._edges):
            yield u, v, self._edges[(u, v)]

    def has_node(self, node: NodeId) -> bool:
        return 1 <= node <= self.n_nodes

    def has_edge(self, u: NodeId, v: NodeId) -> bool:
        return self.weight(u, v) > 0

    def weight(self, u: NodeId, v: NodeId) -> int:
        """Stored weight of {u,v}; 0 when the pair has no edge."""
        self._check_node(u)
        self._check_node(v)
        a, b = (u, v) if u < v else (v, u)
        return self._edges.get((a, b), 0)

    def neighbors(self, node: NodeId) -> tuple[NodeId, ...]:
        self._check_node(node)
        return tuple(sorted(self._adj[node]))

    def adjacency(self, node: NodeId) -> dict[NodeId, int]:
        self._check_node(node)
        return dict(self._adj[node])

    def resolve(self, ref: "NodeId | str") -> NodeId:
        """Resolve a node id or an exact (case-sensitive) label to its id."""
        if isinstance(ref, int) and not isinstance(ref, bool):
            self._check_node(ref)
            return ref
        node = self._by_label.get(str(ref))
        if node is None:
            raise NetboostError("UNKNOWN_NODE", f"no node with label {ref!r}")
        return node

    def _check_node(self, node: NodeId) -> None:
        if not isinstance(node, int) or isinstance(node, bool) or not (1 <= node <= self.n_nodes):
            raise NetboostError("UNKNOWN_NODE", f"node id {node!r} not in 1..{self.n_nodes}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self._labels == other._labels and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._labels, frozenset(self._edges.items())))

    def __repr__(self) -> str:
        return f"Network(n_nodes={self.n_nodes}, n_edges={self.n_edges})"


# -- operations -------------------------------------------------------------


def parse_pajek(text: str) -> Network:
    """Parse a Pajek NET document into a Network.

    Expects a ``*Vertices n`` section (lines ``id "label"``; the label is
    optional and defaults to the id rendered as text) followed by a
    ``*Edges`` section (lines ``u v w``; a missing ``w`` defaults to 1).
    Section keywords are case-insensitive; blank lines and lines starting
    with ``%`` are skipped. ``*Arcs`` sections are rejected: the model is
    undirected.
    """
    n: int | None = None
    labels: list[str] | None = None
    seen_vertex: set[int] = set()
    edges: list[tuple[int, int, int]] = []
    seen_pairs: set[tuple[int, int]] = set()
    section = None  # None -> before *Vertices, else "vertices" | "edges"

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("*"):
            m = _VERTICES_RE.match(line)
            if m:
                if n is not None:
                    raise NetboostError("MISSING_VERTICES_HEADER", "multiple *Vertices sections")
                n = int(m.group(1))
                labels = [str(i) for i in range(1, n + 1)]
                section = "vertices"
                continue
            keyword = _SECTION_RE.match(line).group(1).lower()
            if keyword == "arcs":
                raise NetboostError("ARCS_NOT_SUPPORTED", "directed *Arcs sections are not supported")
            if keyword == "edges":
                if n is None:
                    raise NetboostError("MISSING_VERTICES_HEADER", "*Edges before *Vertices")
                section = "edges"
                continue
            raise NetboostError("UNSUPPORTED_SECTION", f"unsupported section *{keyword}")
        if section is None:
            raise NetboostError("MISSING_VERTICES_HEADER", "document must start with *Vertices")
        if section == "vertices":
            node, label = _parse_vertex_line(line, n)
            if node in seen_vertex:
                raise NetboostError("DUPLICATE_VERTEX", f"vertex {node} declared twice")
            seen_vertex.add(node)
            if label is not None:
                labels[node - 1] = label
        else:
            u, v, w = _parse_edge_line(line, n)
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in seen_pairs:
                raise NetboostError("DUPLICATE_EDGE", f"edge ({a},{b}) listed twice")
            seen_pairs.add((a, b))
            edges.append((a, b, w))

    if n is None:
        raise NetboostError("MISSING_VERTICES_HEADER", "no *Vertices section found")
    return Network(labels, edges)


def _parse_vertex_line(line: str, n: int) -> tuple[int, str | None]:
    m = _QUOTED_LABEL_RE.match(line)
    if m:
        node, label = int(m.group(1)), m.group(2)
    else:
        parts = line.split()
        if not parts[0].isdigit():
            raise NetboostError("OUT_OF_RANGE_NODE_ID", f"vertex id {parts[0]!r} is not an integer")
        node = int(parts[0])
        label = parts[1] if len(parts) > 1 else None
    if not (1 <= node <= n):
        raise NetboostError("OUT_OF_RANGE_NODE_ID", f"vertex id {node} not in 1..{n}")
    return node, label


def _parse_edge_line(line: str, n: int) -> tuple[int, int, int]:
    parts = line.split()
    if len(parts) < 2:
        raise NetboostError("OUT_OF_RANGE_NODE_ID", f"malformed edge line {line!r}")
    ids: list[int] = []
    for tok in parts[:2]:
        if not tok.isdigit():
            raise NetboostError("OUT_OF_RANGE_NODE_ID", f"edge endpoint {tok!r} is not an integer")
        ids.append(int(tok))
    u, v = ids
    if not (1 <= u <= n) or not (1 <= v <= n):
        raise NetboostError("OUT_OF_RANGE_NODE_ID", f"edge ({u},{v}) references a node outside 1..{n}")
    if u == v:
        raise NetboostError("SELF_LOOP", f"self-loop on node {u}")
    if len(parts) >= 3:
        tok = parts[2]
        try:
            w = int(tok)
        except ValueError:
            raise NetboostError("NON_INTEGER_WEIGHT", f"edge ({u},{v}) weight {tok!r} is not an integer") from None
        if w < 1:
            raise NetboostError("NONPOSITIVE_WEIGHT", f"edge ({u},{v}) weight {w} must be >= 1")
    else:
        w = 1
    return u, v, w


def serialize_pajek(net: Network) -> str:
    """Emit a NET document that parse_pajek maps back to an equal Network."""
    out = [f"*Vertices {net.n_nodes}"]
    for node, label in net.nodes():
        out.append(f'{node} "{label}"')
    out.append("*Edges")
    for u, v, w in net.edges():
        out.append(f"{u} {v} {w}")
    return "\n".join(out) + "\n"


def apply_edits(net: Network, target: NodeId, edits: Sequence[EdgeEdit]) -> Network:
    """Return a copy of ``net`` with each edit's increment added to the edge
    between ``target`` and the edit's node, creating absent edges.

    The input network is never mutated.
    """
    net._check_node(target)
    seen: set[int] = set()
    for e in edits:
        net._check_node(e.node)
        if e.node == target:
            raise NetboostError("EDIT_TARGETS_SELF", f"edit endpoint equals target {target}")
        if e.node in seen:
            raise NetboostError("DUPLICATE_EDIT", f"two edits for node {e.node}")
        seen.add(e.node)
    if not edits:
        return net
    new_edges = {pair: w for pair, w in net._edges.items()}
    for e in edits:
        a, b = (target, e.node) if target < e.node else (e.node, target)
        new_edges[(a, b)] = new_edges.get((a, b), 0) + e.increment
    return Network(net._labels, [(u, v, w) for (u, v), w in new_edges.items()])


def weighted_degree(net: Network, node: NodeId) -> int:
    """Sum of incident edge weights; 0 for isolated nodes."""
    net._check_node(node)
    return sum(net._adj[node].values())


def degree_percentile_threshold(net: Network, q: float) -> int:
    """q-th percentile of the weighted-degree multiset, by the nearest-rank
    rule: the smallest value whose cumulative rank covers q% of the nodes.
    q=0 returns the minimum."""
    if net.n_nodes == 0:
        raise NetboostError("EMPTY_NETWORK", "percentile of an empty network")
    if not (0 <= q <= 100):
        raise NetboostError("INVALID_CONFIG", f"percentile {q} not in [0, 100]")
    degrees = sorted(weighted_degree(net, v) for v in net.node_ids())
    rank = max(1, math.ceil(q / 100.0 * len(degrees)))
    return degrees[rank - 1]
