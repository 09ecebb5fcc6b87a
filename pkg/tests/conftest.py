"""Shared fixtures and random-graph helpers for the test suite."""

from __future__ import annotations

import random

import pytest

from netboost import Network


@pytest.fixture
def star_pendant() -> Network:
    """Hub h with leaves l1..l3, plus a pendant target v attached to l1.

    Node ids: h=1, l1=2, l2=3, l3=4, v=5. The canonical solver instance:
    with budget 2 and new connections only, v should gain edges to l2 then
    l3 (ascending-id tie-break) and reach betweenness 1.5.
    """
    return Network(["h", "l1", "l2", "l3", "v"], [(1, 2, 1), (1, 3, 1), (1, 4, 1), (2, 5, 1)])


@pytest.fixture
def path4() -> Network:
    return Network(["a", "b", "c", "d"], [(1, 2, 1), (2, 3, 1), (3, 4, 1)])


@pytest.fixture
def weighted_triangle() -> Network:
    """a-b w2, b-c w2, a-c w1: under RECIPROCAL the a-c distance is 1.0 both
    directly and through b, so b sits on half the shortest paths."""
    return Network(["a", "b", "c"], [(1, 2, 2), (2, 3, 2), (1, 3, 1)])


def random_network(rng: random.Random, n_min=2, n_max=7, w_max=5, p=None) -> Network:
    """Random graph (possibly disconnected) with integer weights."""
    n = rng.randint(n_min, n_max)
    density = p if p is not None else rng.choice([0.25, 0.5, 0.8])
    edges = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < density:
                edges.append((u, v, rng.randint(1, w_max)))
    return Network([f"n{i}" for i in range(1, n + 1)], edges)


def random_connected_network(rng: random.Random, n_min=2, n_max=7, w_max=5, extra=0.3) -> Network:
    """Random spanning tree plus extra edges: always connected."""
    n = rng.randint(n_min, n_max)
    edges = {}
    for v in range(2, n + 1):
        u = rng.randint(1, v - 1)
        edges[(u, v)] = rng.randint(1, w_max)
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if (u, v) not in edges and rng.random() < extra:
                edges[(u, v)] = rng.randint(1, w_max)
    return Network([f"n{i}" for i in range(1, n + 1)], [(u, v, w) for (u, v), w in edges.items()])


def is_connected(net: Network) -> bool:
    if net.n_nodes == 0:
        return True
    seen = {1}
    frontier = [1]
    while frontier:
        u = frontier.pop()
        for v in net.neighbors(u):
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return len(seen) == net.n_nodes
