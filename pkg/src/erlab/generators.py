"""Seeded graph families used by the tests, experiments and the ``gen`` command."""

from __future__ import annotations

import itertools
from typing import Callable, NamedTuple

import numpy as np

from .decomposition import TreeDecomposition
from .errors import BadParams
from .graph import WeightedGraph


class Generated(NamedTuple):
    graph: WeightedGraph
    td: TreeDecomposition | None = None
    partner: WeightedGraph | None = None


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _need(cond: bool, msg: str):
    if not cond:
        raise BadParams(msg)


def _weighted(edges, rng, weights):
    if weights is None:
        return [(u, v, 1.0) for u, v in edges]
    lo, hi = weights
    return [(u, v, float(rng.uniform(lo, hi))) for u, v in edges]


def path(n: int) -> WeightedGraph:
    return WeightedGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> WeightedGraph:
    _need(n >= 3, "a cycle needs n >= 3")
    return WeightedGraph(n, [(i, (i + 1) % n) for i in range(n)])


def star(n: int) -> WeightedGraph:
    """Star on ``n`` vertices with center 0."""
    return WeightedGraph(n, [(0, i) for i in range(1, n)])


def clique(n: int) -> WeightedGraph:
    return WeightedGraph(n, itertools.combinations(range(n), 2))


def ladder(rungs: int) -> WeightedGraph:
    """2 x ``rungs`` grid: max degree 3, treewidth 2."""
    _need(rungs >= 1, "ladder needs at least one rung")
    edges = [(2 * i, 2 * i + 1) for i in range(rungs)]
    edges += [(2 * i + s, 2 * i + 2 + s) for i in range(rungs - 1) for s in (0, 1)]
    return WeightedGraph(2 * rungs, edges)


def triangle_chain(t: int) -> WeightedGraph:
    """``t`` triangles in a row, consecutive ones joined by a single bridge edge."""
    _need(t >= 1, "need at least one triangle")
    edges = []
    for i in range(t):
        a, b, c = 3 * i, 3 * i + 1, 3 * i + 2
        edges += [(a, b), (b, c), (a, c)]
        if i + 1 < t:
            edges.append((c, c + 1))
    return WeightedGraph(3 * t, edges)


def windmill(t: int) -> WeightedGraph:
    """Friendship graph: ``t`` triangles sharing vertex 0."""
    _need(t >= 1, "need at least one triangle")
    edges = []
    for i in range(t):
        a, b = 2 * i + 1, 2 * i + 2
        edges += [(0, a), (0, b), (a, b)]
    return WeightedGraph(2 * t + 1, edges)


def bowtie() -> WeightedGraph:
    """Two triangles sharing vertex 2."""
    return WeightedGraph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


def barbell() -> WeightedGraph:
    """Two triangles {0,1,2} and {3,4,5} joined by the bridge (2, 3)."""
    return WeightedGraph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def random_tree(n: int, seed=None, weights=None) -> WeightedGraph:
    rng = _rng(seed)
    perm = rng.permutation(n)
    edges = [(int(perm[i]), int(perm[rng.integers(0, i)])) for i in range(1, n)]
    return WeightedGraph(n, _weighted(edges, rng, weights))


def random_connected(n: int, p: float = 0.3, seed=None, weights=None) -> WeightedGraph:
    """Random spanning tree plus every other pair independently with probability ``p``."""
    _need(0 <= p <= 1, "p must lie in [0, 1]")
    rng = _rng(seed)
    perm = rng.permutation(n)
    edges = {tuple(sorted((int(perm[i]), int(perm[rng.integers(0, i)])))) for i in range(1, n)}
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < p:
            edges.add((u, v))
    return WeightedGraph(n, _weighted(sorted(edges), rng, weights))


def random_biconnected(n: int, p: float = 0.2, seed=None, weights=None) -> WeightedGraph:
    """Random Hamiltonian cycle plus chords; vertex- and edge-biconnected for n >= 3."""
    _need(n >= 3, "need n >= 3")
    rng = _rng(seed)
    perm = [int(x) for x in rng.permutation(n)]
    edges = {tuple(sorted((perm[i], perm[(i + 1) % n]))) for i in range(n)}
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < p:
            edges.add((u, v))
    return WeightedGraph(n, _weighted(sorted(edges), rng, weights))


def random_bounded_degree(n: int, d: int, p: float = 0.5, seed=None) -> WeightedGraph:
    """Connected unweighted graph with max degree <= ``d`` (``d >= 2``)."""
    _need(d >= 2, "degree bound must be at least 2")
    rng = _rng(seed)
    perm = [int(x) for x in rng.permutation(n)]
    deg = [0] * n
    edges = set()
    for i in range(1, n):
        # perm[i - 1] has degree 1 here, so the candidate list is never empty
        choices = [perm[j] for j in range(i) if deg[perm[j]] < d]
        u = perm[i]
        v = choices[int(rng.integers(0, len(choices)))]
        edges.add(tuple(sorted((u, v))))
        deg[u] += 1
        deg[v] += 1
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and deg[u] < d and deg[v] < d and rng.random() < p / n * 4:
            edges.add((u, v))
            deg[u] += 1
            deg[v] += 1
    return WeightedGraph(n, sorted(edges))


def caterpillar(n: int, seed=None, spine: int | None = None, weights=None) -> Generated:
    """Caterpillar on ``n`` vertices together with a width-1 path decomposition."""
    _need(n >= 2, "caterpillar needs n >= 2")
    rng = _rng(seed)
    spine = spine if spine is not None else max(2, n // 3)
    _need(2 <= spine <= n, "spine length must lie in [2, n]")
    leaves_at = [[] for _ in range(spine)]
    for leaf in range(spine, n):
        leaves_at[int(rng.integers(0, spine))].append(leaf)
    edges, bags = [], []
    for i in range(spine):
        for leaf in leaves_at[i]:
            edges.append((i, leaf))
            bags.append({i, leaf})
        if i + 1 < spine:
            edges.append((i, i + 1))
            bags.append({i, i + 1})
    td = TreeDecomposition(bags, [(k, k + 1) for k in range(len(bags) - 1)])
    return Generated(WeightedGraph(n, _weighted(edges, rng, weights)), td)


def path_decomposition(n: int) -> TreeDecomposition:
    return TreeDecomposition([{i, i + 1} for i in range(n - 1)], [(i, i + 1) for i in range(n - 2)])


def cycle_decomposition(n: int) -> TreeDecomposition:
    """Width-2 decomposition of the cycle 0..n-1: bags {0, i, i+1}."""
    bags = [{0, i, i + 1} for i in range(1, n - 1)]
    return TreeDecomposition(bags, [(i, i + 1) for i in range(len(bags) - 1)])


def random_partial_ktree(n: int, k: int, seed=None, keep: float = 0.7, weights=None) -> Generated:
    """Connected subgraph of a random k-tree, with the k-tree's width-k decomposition."""
    _need(k >= 1 and n >= k + 1, "need k >= 1 and n >= k + 1")
    rng = _rng(seed)
    first = list(range(k + 1))
    bags = [set(first)]
    tree_edges = []
    kedges = set(itertools.combinations(first, 2))
    # each k-clique -> index of a bag containing it
    cliques = {frozenset(c): 0 for c in itertools.combinations(first, k)}
    for v in range(k + 1, n):
        keys = sorted(cliques, key=sorted)
        c = keys[int(rng.integers(0, len(keys)))]
        host = cliques[c]
        bags.append(set(c) | {v})
        b = len(bags) - 1
        tree_edges.append((host, b))
        for u in c:
            kedges.add(tuple(sorted((u, v))))
        for sub in itertools.combinations(sorted(c), k - 1):
            cliques[frozenset(sub) | {v}] = b
    # keep a random spanning tree of the k-tree so the subgraph stays connected
    order = [tuple(e) for e in rng.permutation(sorted(kedges))]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    kept = []
    for u, v in order:
        u, v = int(u), int(v)
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            kept.append((u, v))
        elif rng.random() < keep:
            kept.append((u, v))
    td = TreeDecomposition(bags, tree_edges)
    return Generated(WeightedGraph(n, _weighted(sorted(kept), rng, weights)), td)


def sp_er_pair(n: int, i: int, j: int) -> Generated:
    """The double-star graph G and its square variant H_{i,j}.

    Vertices are ``v_1..v_n`` with ids ``0..n-1``. In G the centers v_1, v_2
    are adjacent and each holds half of the remaining vertices as leaves
    (v_3..v_{n/2+1} on v_1). H_{i,j} drops the edge v_1 v_2, detaches
    v_i and v_j from their centers and joins each of them to both centers,
    closing the square v_1 v_i v_2 v_j.
    """
    _need(n % 2 == 0 and n >= 8, "n must be even and at least 8")
    _need(3 <= i <= n and 3 <= j <= n and i != j, "i, j must be distinct in 3..n")
    half = n // 2
    center = {v: (0 if v <= half + 1 else 1) for v in range(3, n + 1)}
    g_edges = [(0, 1)] + [(center[v], v - 1) for v in range(3, n + 1)]
    h_edges = [(center[v], v - 1) for v in range(3, n + 1) if v not in (i, j)]
    h_edges += [(0, i - 1), (1, i - 1), (0, j - 1), (1, j - 1)]
    return Generated(WeightedGraph(n, g_edges), None, WeightedGraph(n, h_edges))


def _fam_random_tree(p, seed):
    return Generated(random_tree(int(p["n"]), seed, p.get("weights")))


FAMILIES: dict[str, Callable[[dict, object], Generated]] = {
    "path": lambda p, s: Generated(path(int(p["n"])), path_decomposition(int(p["n"])) if int(p["n"]) >= 2 else None),
    "cycle": lambda p, s: Generated(cycle(int(p["n"])), cycle_decomposition(int(p["n"]))),
    "star": lambda p, s: Generated(star(int(p["n"]))),
    "clique": lambda p, s: Generated(clique(int(p["n"]))),
    "ladder": lambda p, s: Generated(ladder(int(p["rungs"]))),
    "triangle_chain": lambda p, s: Generated(triangle_chain(int(p["t"]))),
    "windmill": lambda p, s: Generated(windmill(int(p["t"]))),
    "bowtie": lambda p, s: Generated(bowtie()),
    "barbell": lambda p, s: Generated(barbell()),
    "random_tree": _fam_random_tree,
    "random_connected": lambda p, s: Generated(
        random_connected(int(p["n"]), float(p.get("p", 0.3)), s, p.get("weights"))
    ),
    "random_biconnected": lambda p, s: Generated(
        random_biconnected(int(p["n"]), float(p.get("p", 0.2)), s, p.get("weights"))
    ),
    "random_bounded_degree": lambda p, s: Generated(
        random_bounded_degree(int(p["n"]), int(p["d"]), float(p.get("p", 0.5)), s)
    ),
    "caterpillar": lambda p, s: caterpillar(int(p["n"]), s, p.get("spine"), p.get("weights")),
    "partial_ktree": lambda p, s: random_partial_ktree(
        int(p["n"]), int(p["k"]), s, float(p.get("keep", 0.7)), p.get("weights")
    ),
    "sp_er_pair": lambda p, s: sp_er_pair(int(p["n"]), int(p["i"]), int(p["j"])),
}


def generate(family: str, params: dict | None = None, seed=None) -> Generated:
    """Build a graph from a named family; deterministic for a fixed seed."""
    params = dict(params or {})
    if family not in FAMILIES:
        raise BadParams(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    try:
        return FAMILIES[family](params, seed)
    except KeyError as exc:
        raise BadParams(f"family {family!r} needs parameter {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, BadParams):
            raise
        raise BadParams(f"bad parameters for {family!r}: {exc}") from None
