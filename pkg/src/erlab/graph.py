"""Immutable weighted simple graphs and the tagged resistance value."""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Iterable, Union

import numpy as np

from .errors import BadParams

Number = Union[float, Fraction]


@total_ordering
class Resistance:
    """Effective resistance between two vertices: a finite value or infinite.

    Finite values are floats, or Fractions when produced by the exact backend.
    Infinite marks a pair in different connected components.
    """

    __slots__ = ("_value",)

    def __init__(self, value: Number | None):
        if value is not None and isinstance(value, float) and not math.isfinite(value):
            raise ValueError("use Resistance.infinite() for disconnected pairs")
        self._value = value

    @classmethod
    def infinite(cls) -> "Resistance":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self._value is None

    @property
    def is_finite(self) -> bool:
        return self._value is not None

    @property
    def value(self) -> Number:
        """The finite value; raises for infinite resistances."""
        if self._value is None:
            raise ValueError("infinite resistance has no finite value")
        return self._value

    @property
    def is_exact(self) -> bool:
        return isinstance(self._value, Fraction)

    def __float__(self) -> float:
        return math.inf if self._value is None else float(self._value)

    def _key(self):
        return (1, 0) if self._value is None else (0, self._value)

    def __eq__(self, other):
        if isinstance(other, Resistance):
            return self._key() == other._key()
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, Resistance):
            return self._key() < other._key()
        return NotImplemented

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self._value is None:
            return "Resistance(inf)"
        return f"Resistance({self._value!r})"

    def __str__(self):
        if self._value is None:
            return "inf"
        if isinstance(self._value, Fraction):
            return str(self._value)
        return repr(float(self._value))


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class WeightedGraph:
    """Undirected simple graph on vertices ``0..n-1`` with positive edge weights.

    Parallel input edges are merged by summing their weights; self-loops,
    non-positive or non-finite weights and out-of-range ids are rejected.
    Edges are stored as ``(u, v, w)`` with ``u < v``, sorted.
    """

    def __init__(self, n: int, edges: Iterable = ()):
        if int(n) != n or n < 1:
            raise BadParams(f"vertex count must be a positive integer, got {n!r}")
        n = int(n)
        weights: dict[tuple[int, int], float] = {}
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 1.0
            else:
                u, v, w = e
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise BadParams(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise BadParams(f"self-loop at vertex {u}")
            w = float(w)
            if not (w > 0 and math.isfinite(w)):
                raise BadParams(f"edge ({u}, {v}) has invalid weight {w}")
            key = _pair(u, v)
            weights[key] = weights.get(key, 0.0) + w
        self.n = n
        self._weights = dict(sorted(weights.items()))

    @property
    def edges(self) -> tuple[tuple[int, int, float], ...]:
        return tuple((u, v, w) for (u, v), w in self._weights.items())

    @property
    def m(self) -> int:
        return len(self._weights)

    def weight(self, u: int, v: int) -> float:
        """Weight of the pair, 0.0 when the vertices are not adjacent."""
        return self._weights.get(_pair(u, v), 0.0)

    def has_edge(self, u: int, v: int) -> bool:
        return _pair(u, v) in self._weights

    @cached_property
    def _adj(self) -> list[dict[int, float]]:
        adj: list[dict[int, float]] = [{} for _ in range(self.n)]
        for (u, v), w in self._weights.items():
            adj[u][v] = w
            adj[v][u] = w
        return adj

    def neighbors(self, v: int) -> list[int]:
        return sorted(self._adj[v])

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def weighted_degree(self, v: int) -> float:
        return sum(self._adj[v].values())

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    @property
    def is_unweighted(self) -> bool:
        return all(w == 1.0 for w in self._weights.values())

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for (u, v), w in self._weights.items():
            a[u, v] = a[v, u] = w
        return a

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components, each sorted, ordered by smallest member."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        label = [0] * self.n
        for i, comp in enumerate(self.components):
            for v in comp:
                label[v] = i
        return tuple(label)

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    def hop_distances(self, source: int) -> list[float]:
        """Unweighted BFS distances from ``source``; ``math.inf`` when unreachable."""
        dist = [math.inf] * self.n
        dist[source] = 0
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for y in self._adj[x]:
                if dist[y] == math.inf:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def with_weight(self, u: int, v: int, w: float) -> "WeightedGraph":
        """Copy with the pair (u, v) set to weight ``w``; ``w == 0`` removes it."""
        weights = dict(self._weights)
        key = _pair(u, v)
        if w == 0:
            weights.pop(key, None)
        else:
            weights[key] = w
        return WeightedGraph(self.n, [(a, b, x) for (a, b), x in weights.items()])

    def without_vertex(self, v: int) -> "WeightedGraph":
        """Same vertex set with every edge at ``v`` removed (``v`` becomes isolated)."""
        return WeightedGraph(self.n, [(a, b, w) for a, b, w in self.edges if v not in (a, b)])

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self._weights == other._weights

    def __hash__(self):
        return hash((self.n, tuple(self._weights.items())))

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m})"

    def isclose(self, other: "WeightedGraph", tol: float = 1e-6) -> bool:
        """Same vertex count, same edge set, and weights within ``tol``."""
        if self.n != other.n or set(self._weights) != set(other._weights):
            return False
        return all(abs(w - other._weights[k]) <= tol for k, w in self._weights.items())

    def max_weight_error(self, other: "WeightedGraph") -> float:
        """Largest absolute weight difference over all pairs (missing edges count as 0)."""
        keys = set(self._weights) | set(other._weights)
        return max((abs(self._weights.get(k, 0.0) - other._weights.get(k, 0.0)) for k in keys), default=0.0)
