"""Sparse graph containers and synthetic graph generation.

Graphs are stored as adjacency sets, never as dense n x n matrices, so the
memory footprint of obfuscated outputs stays proportional to the number of
edges rather than n^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .rng import RngStream, as_generator


@dataclass(frozen=True)
class Graph:
    """Immutable sparse graph over nodes 0..n-1.

    Undirected edges are stored canonically with i < j; queries treat (i, j)
    and (j, i) identically. Self-loops are rejected.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    directed: bool = False

    def __init__(self, n: int, edges, directed: bool = False):
        if n < 0:
            raise ValueError(f"node count must be non-negative, got {n}")
        canonical = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop ({i}, {i}) not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if not directed and i > j:
                i, j = j, i
            canonical.add((i, j))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(canonical))
        object.__setattr__(self, "directed", directed)

    @cached_property
    def _adjacency(self) -> tuple[frozenset[int], ...]:
        out: list[set[int]] = [set() for _ in range(self.n)]
        for i, j in self.edges:
            out[i].add(j)
            if not self.directed:
                out[j].add(i)
        return tuple(frozenset(s) for s in out)

    def neighbors(self, i: int) -> frozenset[int]:
        if not (0 <= i < self.n):
            raise ValueError(f"node {i} out of range for n={self.n}")
        return self._adjacency[i]

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        if not self.directed and i > j:
            i, j = j, i
        return (i, j) in self.edges

    def induced_subgraph(self, nodes) -> tuple["Graph", tuple[int, ...]]:
        """Subgraph on `nodes`, renumbered densely in sorted order.

        Returns the subgraph and the node map (new index -> original index).
        """
        keep = sorted(set(nodes))
        index = {orig: new for new, orig in enumerate(keep)}
        edges = {
            (index[i], index[j])
            for i, j in self.edges
            if i in index and j in index
        }
        return Graph(len(keep), edges, directed=self.directed), tuple(keep)


@dataclass(frozen=True)
class NeighborList:
    """One user's adjacency row: the sparse set of indices j with a bit set.

    The owner's own index is never a member (zero diagonal).
    """

    owner: int
    bits: frozenset[int]
    n: int

    def __post_init__(self):
        if not (0 <= self.owner < self.n):
            raise ValueError(f"owner {self.owner} out of range for n={self.n}")
        if self.owner in self.bits:
            raise ValueError(f"diagonal bit set for owner {self.owner}")
        for j in self.bits:
            if not (0 <= j < self.n):
                raise ValueError(f"bit index {j} out of range for n={self.n}")

    @property
    def degree(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class GraphCollection:
    """A set of graphs with optional per-graph class labels."""

    graphs: tuple[Graph, ...]
    labels: tuple[int, ...] | None = None
    name: str = ""
    # count of malformed input lines (self-loops, duplicates) dropped at parse time
    warnings: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.labels is not None and len(self.labels) != len(self.graphs):
            raise ValueError(
                f"{len(self.labels)} labels for {len(self.graphs)} graphs"
            )

    def __len__(self) -> int:
        return len(self.graphs)

    def max_nodes(self) -> int:
        return max((g.n for g in self.graphs), default=0)


def neighbor_list(g: Graph, i: int) -> NeighborList:
    """Adjacency row of user i; for undirected graphs both orientations count."""
    return NeighborList(owner=i, bits=g.neighbors(i), n=g.n)


def generate_ba(n: int, m: int, seed: "int | RngStream") -> Graph:
    """Barabasi-Albert preferential-attachment graph.

    Starts from a complete graph on m+1 nodes; each subsequent node attaches
    to m distinct existing nodes chosen with probability proportional to
    current degree. Edge count is exactly m*(n-m-1) + C(m+1, 2); the average
    degree approaches 2m for n >> m.
    """
    if m < 1 or m >= n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    gen = as_generator(RngStream(seed) if isinstance(seed, int) else seed)

    edges: set[tuple[int, int]] = set()
    # seed clique guarantees every new node finds m distinct targets
    repeated: list[int] = []
    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            edges.add((i, j))
        repeated.extend([i] * m)

    for source in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(repeated[int(gen.integers(len(repeated)))])
        for t in sorted(targets):
            edges.add((t, source))
            repeated.append(t)
        repeated.extend([source] * m)

    assert len(edges) == m * (n - m - 1) + math.comb(m + 1, 2)
    return Graph(n, edges, directed=False)


def subsample_nodes(g: Graph, gamma: float, rng: "RngStream | np.random.Generator") -> Graph:
    """Induced subgraph on a uniform sample of round(gamma*n) nodes."""
    if not (0.0 <= gamma <= 1.0):
        raise ValueError(f"gamma must be in [0, 1], got {gamma}")
    k = int(math.floor(gamma * g.n + 0.5))
    if k >= g.n:
        return g
    gen = as_generator(rng)
    keep = gen.choice(g.n, size=k, replace=False)
    sub, _ = g.induced_subgraph(int(v) for v in keep)
    return sub
