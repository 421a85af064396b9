"""Tree decompositions: structure, validation, and bag-tree distances."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import InvalidDecomposition
from .graph import WeightedGraph


class TreeDecomposition:
    """Bags of vertex ids connected by a tree.

    The tree shape is checked on construction (``len(bags) - 1`` edges, connected);
    whether the bags decompose a particular graph is a separate question,
    see :func:`validate_tree_decomposition`.
    """

    def __init__(self, bags: Iterable[Iterable[int]], tree_edges: Iterable[tuple[int, int]]):
        self.bags = tuple(frozenset(int(v) for v in b) for b in bags)
        self.tree_edges = tuple(sorted((min(a, b), max(a, b)) for a, b in tree_edges))
        k = len(self.bags)
        if k == 0:
            raise InvalidDecomposition("a tree decomposition needs at least one bag")
        for a, b in self.tree_edges:
            if not (0 <= a < k and 0 <= b < k) or a == b:
                raise InvalidDecomposition(f"tree edge ({a}, {b}) is not between two distinct bags")
        if len(set(self.tree_edges)) != k - 1 or len(self.tree_edges) != k - 1:
            raise InvalidDecomposition(f"{k} bags need exactly {k - 1} distinct tree edges")
        if len(self._bfs(0)) != k:
            raise InvalidDecomposition("tree edges do not connect all bags")

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(x)) for x in adj)

    def _bfs(self, start: int) -> dict[int, int]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        dist = {start: 0}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    @property
    def max_tree_degree(self) -> int:
        return max(len(a) for a in self.adjacency)

    @cached_property
    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.bags)

    def bags_containing(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.bags) if v in b]

    @property
    def max_bags_per_vertex(self) -> int:
        counts: dict[int, int] = {}
        for b in self.bags:
            for v in b:
                counts[v] = counts.get(v, 0) + 1
        return max(counts.values(), default=0)

    @cached_property
    def bag_distances(self) -> tuple[tuple[int, ...], ...]:
        k = len(self.bags)
        rows = []
        for i in range(k):
            d = self._bfs(i)
            rows.append(tuple(d[j] for j in range(k)))
        return tuple(rows)

    def __repr__(self):
        return f"TreeDecomposition(bags={len(self.bags)}, width={self.width})"


class TdVerdict(NamedTuple):
    valid: bool
    condition: int | None
    message: str


def validate_tree_decomposition(g: WeightedGraph, td: TreeDecomposition) -> TdVerdict:
    """Check vertex coverage (1), edge coverage (2) and subtree connectivity (3), in that order."""
    extra = sorted(v for v in td.vertices if not 0 <= v < g.n)
    if extra:
        return TdVerdict(False, 1, f"bags mention vertices outside the graph: {extra}")
    missing = sorted(set(range(g.n)) - td.vertices)
    if missing:
        return TdVerdict(False, 1, f"vertices not in any bag: {missing}")
    for u, v, _ in g.edges:
        if not any(u in b and v in b for b in td.bags):
            return TdVerdict(False, 2, f"edge ({u}, {v}) is not covered by any bag")
    adj = td.adjacency
    for v in range(g.n):
        holders = set(td.bags_containing(v))
        start = min(holders)
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y in holders and y not in seen:
                    seen.add(y)
                    queue.append(y)
        if seen != holders:
            return TdVerdict(False, 3, f"bags containing vertex {v} do not form a connected subtree")
    return TdVerdict(True, None, "valid")


@dataclass(frozen=True)
class BagDistance:
    nearest: int
    farthest: int


def bag_distance(td: TreeDecomposition, s: int, t: int) -> BagDistance:
    """Tree distance between bags holding ``s`` and ``t``, minimised and maximised over the choice of bags."""
    d = td.bag_distances
    vals = [d[i][j] for i in td.bags_containing(s) for j in td.bags_containing(t)]
    return BagDistance(min(vals), max(vals))
