"""Simple undirected graph with the sampling disciplines of the two models.

Preferential draws use weight ``k + 1`` and anti-preferential draws use
weight ``1 / k``. Both are exact rejection samplers with O(1) expected cost:

* ``k + 1`` splits into "one unit per node" plus "one unit per edge endpoint",
  so a uniform integer below ``2E + N`` picks a node or an edge endpoint.
* ``1 / k`` is a uniform alive node accepted with probability ``1 / k``.

Each falls back to an exact linear scan after a bounded number of rejections,
which keeps the output distribution unchanged.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from collections import Counter
from collections.abc import Container, Iterable
from itertools import accumulate
from pathlib import Path

import numpy as np

from .distribution import DegreeDistribution
from .errors import EmptyPopulation, InsufficientTargets, InvalidParameter

RngStream = random.Random

_MAX_PREF_REJECTIONS = 64
_MAX_ANTI_REJECTIONS = 256


def make_rng(seed: int) -> RngStream:
    return random.Random(int(seed))


class EvolvingGraph:
    """Mutable simple graph whose node ids are handed out once and never reused."""

    def __init__(self):
        self.adj: dict[int, set[int]] = {}
        self._alive: list[int] = []
        self._alive_pos: dict[int, int] = {}
        self._edges: list[tuple[int, int]] = []
        self._edge_pos: dict[tuple[int, int], int] = {}
        self._isolated: set[int] = set()
        self._next_id = 0

    # -- queries ---------------------------------------------------------
    def degree(self, i: int) -> int:
        return len(self.adj[i])

    def alive(self, i: int) -> bool:
        return i in self.adj

    def retired(self, i: int) -> bool:
        return 0 <= i < self._next_id and i not in self.adj

    @property
    def n_alive(self) -> int:
        return len(self._alive)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def next_id(self) -> int:
        return self._next_id

    def nodes(self) -> list[int]:
        return sorted(self.adj)

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    def has_edge(self, i: int, j: int) -> bool:
        return i in self.adj and j in self.adj[i]

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(self.adj[i]) for i in self.nodes()), dtype=np.int64, count=len(self.adj))

    # -- mutation --------------------------------------------------------
    def add_node(self) -> int:
        i = self._next_id
        self._next_id += 1
        self.adj[i] = set()
        self._alive_pos[i] = len(self._alive)
        self._alive.append(i)
        self._isolated.add(i)
        return i

    def add_edge(self, i: int, j: int) -> None:
        if i == j:
            raise InvalidParameter(f"self-loop on node {i}")
        ai, aj = self.adj[i], self.adj[j]
        if j in ai:
            raise InvalidParameter(f"edge ({i}, {j}) already present")
        ai.add(j)
        aj.add(i)
        key = (i, j) if i < j else (j, i)
        self._edge_pos[key] = len(self._edges)
        self._edges.append(key)
        self._isolated.discard(i)
        self._isolated.discard(j)

    def remove_edge(self, i: int, j: int) -> None:
        self.adj[i].remove(j)
        self.adj[j].remove(i)
        key = (i, j) if i < j else (j, i)
        pos = self._edge_pos.pop(key)
        last = self._edges.pop()
        if pos < len(self._edges):
            self._edges[pos] = last
            self._edge_pos[last] = pos
        if not self.adj[i]:
            self._isolated.add(i)
        if not self.adj[j]:
            self._isolated.add(j)

    def remove_node(self, i: int) -> None:
        if self.adj[i]:
            raise InvalidParameter(f"node {i} still has {len(self.adj[i])} links")
        del self.adj[i]
        self._isolated.discard(i)
        pos = self._alive_pos.pop(i)
        last = self._alive.pop()
        if pos < len(self._alive):
            self._alive[pos] = last
            self._alive_pos[last] = pos

    def uniform_node(self, rng: RngStream) -> int:
        if not self._alive:
            raise EmptyPopulation("graph has no alive nodes")
        return self._alive[int(rng.random() * len(self._alive))]

    def check_invariants(self) -> None:
        """Raise AssertionError if any structural invariant is broken."""
        total = 0
        for i, nbrs in self.adj.items():
            assert i not in nbrs, f"self-loop at {i}"
            for j in nbrs:
                assert j in self.adj, f"edge to dead node {j}"
                assert i in self.adj[j], f"asymmetric adjacency {i}-{j}"
            total += len(nbrs)
        assert total == 2 * len(self._edges), "handshake identity violated"
        assert len(self._edge_pos) == len(self._edges)
        for key, pos in self._edge_pos.items():
            assert self._edges[pos] == key
            assert key[1] in self.adj[key[0]]
        assert sorted(self._alive) == sorted(self.adj)
        assert self._isolated == {i for i, nb in self.adj.items() if not nb}


def new_complete(n0: int) -> EvolvingGraph:
    if n0 < 2:
        raise InvalidParameter(f"complete start graph needs n0 >= 2, got {n0}")
    g = EvolvingGraph()
    ids = [g.add_node() for _ in range(n0)]
    for a in range(n0):
        for b in range(a + 1, n0):
            g.add_edge(ids[a], ids[b])
    return g


def new_isolated(n0: int) -> EvolvingGraph:
    if n0 < 1:
        raise InvalidParameter(f"isolated start graph needs n0 >= 1, got {n0}")
    g = EvolvingGraph()
    for _ in range(n0):
        g.add_node()
    return g


def _weighted_pick(items: list[int], weights: Iterable[float], rng: RngStream) -> int:
    cum = list(accumulate(weights))
    if not cum or cum[-1] <= 0:
        raise EmptyPopulation("no eligible node")
    idx = bisect_right(cum, rng.random() * cum[-1])
    return items[min(idx, len(items) - 1)]


def sample_preferential(g: EvolvingGraph, rng: RngStream, exclude: Container[int] = ()) -> int:
    """Draw an alive node not in ``exclude`` with probability proportional to ``k + 1``."""
    alive = g._alive
    edges = g._edges
    n = len(alive)
    if n == 0:
        raise EmptyPopulation("graph has no alive nodes")
    total = n + 2 * len(edges)
    for _ in range(_MAX_PREF_REJECTIONS):
        u = int(rng.random() * total)
        if u < n:
            i = alive[u]
        else:
            u -= n
            i = edges[u >> 1][u & 1]
        if i not in exclude:
            return i
    # Heavily excluded population: exact conditional draw.
    cands = [i for i in alive if i not in exclude]
    if not cands:
        raise EmptyPopulation("every alive node is excluded")
    return _weighted_pick(cands, (len(g.adj[i]) + 1 for i in cands), rng)


def sample_anti_preferential(
    g: EvolvingGraph, rng: RngStream, restrict: Iterable[int] | None = None
) -> int:
    """Draw a node of degree >= 1 with probability proportional to ``1 / k``.

    With ``restrict`` (typically a neighbourhood) the draw is limited to those
    nodes and computed exactly.
    """
    adj = g.adj
    if restrict is not None:
        cands = [j for j in restrict if adj[j]]
        if not cands:
            raise EmptyPopulation("no node of degree >= 1 in the restriction set")
        return _weighted_pick(cands, (1.0 / len(adj[j]) for j in cands), rng)
    if not g._edges:
        raise EmptyPopulation("graph has no links")
    alive = g._alive
    n = len(alive)
    for _ in range(_MAX_ANTI_REJECTIONS):
        i = alive[int(rng.random() * n)]
        k = len(adj[i])
        if k and rng.random() * k < 1.0:
            return i
    cands = [i for i in alive if adj[i]]
    return _weighted_pick(cands, (1.0 / len(adj[i]) for i in cands), rng)


def add_node_with_links(g: EvolvingGraph, m: int, rng: RngStream) -> int:
    """Add a node linked to ``m`` distinct preferential targets.

    Targets are drawn against the degrees at entry; the new links are only
    wired after all ``m`` draws.
    """
    if g.n_alive < m:
        raise InsufficientTargets(f"need {m} targets, only {g.n_alive} alive nodes")
    chosen: set[int] = set()
    order: list[int] = []
    for _ in range(m):
        j = sample_preferential(g, rng, chosen)
        chosen.add(j)
        order.append(j)
    i = g.add_node()
    for j in order:
        g.add_edge(i, j)
    return i


def remove_one_link(g: EvolvingGraph, rng: RngStream) -> tuple[int, int] | None:
    if not g._edges:
        return None
    i = sample_anti_preferential(g, rng)
    j = sample_anti_preferential(g, rng, restrict=g.adj[i])
    g.remove_edge(i, j)
    return (i, j)


def prune_isolated(g: EvolvingGraph) -> int:
    dead = sorted(g._isolated)
    for i in dead:
        g.remove_node(i)
    return len(dead)


def degree_histogram(g: EvolvingGraph, **meta) -> DegreeDistribution:
    n = g.n_alive
    if n == 0:
        raise EmptyPopulation("cannot build a histogram of an empty graph")
    counts = Counter(len(nb) for nb in g.adj.values())
    p = np.zeros(max(counts) + 1)
    for k, cnt in counts.items():
        p[k] = cnt / n
    return DegreeDistribution(p, {"method": "simulation", "nodes": n, "edges": g.edge_count, **meta})


def write_edge_list(g: EvolvingGraph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, j in g.edges():
            fh.write(f"{i} {j}\n")
