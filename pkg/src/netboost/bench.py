"""Synthetic benchmark networks and the runtime experiment matrix.

The original corpora behind the published runtime tables are not available,
so the generator matches their sizes (nodes exactly, edges exactly) with a
preferential-attachment graph carrying integer weights 1..10: connected by
construction, degree-heterogeneous, deterministic for a fixed seed. Runtime
TRENDS across target tiers / modes / budgets are the reproducible claim,
not absolute seconds.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .betweenness import betweenness_all
from .errors import NetboostError
from .graph import DistanceTransform, Network, NodeId
from .solver import Mode, SolverConfig, solve_co_mbi

SCALES: dict[str, tuple[int, int]] = {
    "net1": (1715, 11747),
    "net2": (8937, 164254),
    "net3": (17307, 412912),
}

TIERS = ("min", "low", "medium", "max")
MAX_WEIGHT = 10


def generate_network(scale: str, seed: int = 42) -> Network:
    """Connected preferential-attachment network at a named scale.

    Node count is exact; edge count is exact (each new node attaches its
    share of the remaining edge quota to distinct existing nodes drawn
    proportionally to degree).
    """
    if scale not in SCALES:
        raise NetboostError("INVALID_CONFIG", f"unknown scale {scale!r}; use one of {sorted(SCALES)}")
    n_nodes, n_edges = SCALES[scale]
    return generate_pa_network(n_nodes, n_edges, seed)


def generate_pa_network(n_nodes: int, n_edges: int, seed: int) -> Network:
    if n_nodes < 3 or n_edges < n_nodes - 1:
        raise NetboostError("INVALID_CONFIG", "need >= 3 nodes and enough edges to stay connected")
    rng = random.Random(seed)
    edges: set[tuple[int, int]] = {(1, 2), (1, 3), (2, 3)}
    attach_pool = [1, 2, 3, 1, 2, 3]  # node repeated per degree
    remaining = n_edges - 3
    nodes_left = n_nodes - 3
    for i in range(4, n_nodes + 1):
        m = remaining // nodes_left
        if remaining % nodes_left:
            m += 1
        m = min(m, i - 1)
        chosen: set[int] = set()
        while len(chosen) < m:
            c = rng.choice(attach_pool)
            if c != i:
                chosen.add(c)
        for c in chosen:
            edges.add((c, i) if c < i else (i, c))
            attach_pool.append(c)
            attach_pool.append(i)
        remaining -= m
        nodes_left -= 1
    if remaining != 0:
        raise NetboostError("INVALID_CONFIG", f"edge quota cannot be met ({remaining} left over)")
    wrng = random.Random(seed + 1)
    labels = [f"w{i}" for i in range(n_nodes)]
    return Network(labels, [(u, v, wrng.randint(1, MAX_WEIGHT)) for u, v in sorted(edges)])


def select_tier_targets(
    net: Network,
    transform: DistanceTransform = DistanceTransform.RECIPROCAL,
    threads: int = 1,
) -> dict[str, NodeId]:
    """Pick one target per betweenness tier: the minimum and maximum, plus
    the nodes at the 25% and 75% ranks of the sorted scores."""
    scores = betweenness_all(net, transform, threads=threads)
    ranked = sorted(net.node_ids(), key=lambda v: (scores[v], v))
    n = len(ranked)
    return {
        "min": ranked[0],
        "low": ranked[max(0, (n - 1) // 4)],
        "medium": ranked[max(0, (3 * (n - 1)) // 4)],
        "max": ranked[-1],
    }


@dataclass
class BenchRow:
    tier: str
    mode: str  # "change-weight" | "new-connection"
    binary_search: bool
    budget: int
    seconds: float
    edits: int
    b_before: float
    b_after: float


def run_matrix(
    net: Network,
    targets: dict[str, NodeId],
    budgets: tuple[int, ...] = (10, 100),
    threads: int = 1,
    repetitions: int = 1,
    progress=None,
) -> list[BenchRow]:
    """The full experiment matrix: tier x mode x binary-search x budget.

    Matches the published protocol: the whole budget goes to at most one
    edge (max_edges=1), and the no-binary-search option spends it all in a
    single probe. Each cell times a self-contained solve (including its own
    betweenness state); ``repetitions`` > 1 takes the median.
    """
    rows: list[BenchRow] = []
    cells = [
        (tier, mode, bs, budget)
        for tier in TIERS
        for mode in (Mode.NEW_CONNECTION, Mode.CHANGE_WEIGHT)
        for bs in (False, True)
        for budget in budgets
    ]
    for idx, (tier, mode, bs, budget) in enumerate(cells):
        cfg = SolverConfig(
            target=targets[tier],
            budget=budget,
            mode=mode,
            max_edges=1,
            use_binary_search=bs,
        )
        elapsed: list[float] = []
        solution = None
        for _ in range(max(1, repetitions)):
            t0 = time.perf_counter()
            solution = solve_co_mbi(net, cfg, threads=threads)
            elapsed.append(time.perf_counter() - t0)
        elapsed.sort()
        rows.append(
            BenchRow(
                tier=tier,
                mode=mode.value,
                binary_search=bs,
                budget=budget,
                seconds=elapsed[len(elapsed) // 2],
                edits=len(solution.edits),
                b_before=solution.target_before,
                b_after=solution.target_after,
            )
        )
        if progress is not None:
            progress((idx + 1) / len(cells), rows[-1])
    return rows


def rows_to_csv(rows: list[BenchRow]) -> str:
    out = ["tier,mode,binary_search,budget,seconds"]
    for r in rows:
        out.append(f"{r.tier},{r.mode},{'on' if r.binary_search else 'off'},{r.budget},{r.seconds:.3f}")
    return "\n".join(out) + "\n"
