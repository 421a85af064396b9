"""Independent reference oracles and hypothesis strategies shared by the tests.

Nothing here calls into the library's linear algebra: resistances come from
the matrix-tree theorem (exact sympy determinants) or from networkx, and
flows are built combinatorially.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import networkx as nx
import numpy as np
import sympy
from hypothesis import strategies as st

from erlab.graph import WeightedGraph


def _sym_laplacian(g: WeightedGraph):
    m = sympy.zeros(g.n, g.n)
    for u, v, w in g.edges:
        fw = sympy.Rational(Fraction(w).limit_denominator(10**9))
        m[u, u] += fw
        m[v, v] += fw
        m[u, v] -= fw
        m[v, u] -= fw
    return m


def _minor(m, drop):
    keep = [i for i in range(m.shape[0]) if i not in drop]
    if not keep:
        return sympy.Integer(1)
    return m.extract(keep, keep).det(method="bareiss")


def matrix_tree_er(g: WeightedGraph, u: int, v: int) -> Fraction:
    """R(u, v) = (weighted 2-forests separating u, v) / (weighted spanning trees)."""
    lap = _sym_laplacian(g)
    num = _minor(lap, {u, v})
    den = _minor(lap, {u})
    r = sympy.Rational(num, den)
    return Fraction(int(r.p), int(r.q))


def spanning_tree_count(g: WeightedGraph) -> int:
    return int(_minor(_sym_laplacian(g), {0}))


def networkx_er(g: WeightedGraph, u: int, v: int) -> float:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    for a, b, w in g.edges:
        h.add_edge(a, b, weight=w)
    return float(nx.resistance_distance(h, u, v, weight="weight", invert_weight=False))


def to_nx(g: WeightedGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_weighted_edges_from(g.edges)
    return h


def tree_path_flow(g: WeightedGraph, s: int, t: int) -> np.ndarray:
    """Unit s-t flow routed along the BFS-tree path (edge order = g.edges, low->high positive)."""
    index = {(a, b): k for k, (a, b, _) in enumerate(g.edges)}
    path = nx.shortest_path(to_nx(g), s, t)
    f = np.zeros(g.m)
    for a, b in zip(path, path[1:]):
        if a < b:
            f[index[(a, b)]] += 1.0
        else:
            f[index[(b, a)]] -= 1.0
    return f


def cycle_basis_vectors(g: WeightedGraph) -> list[np.ndarray]:
    """Circulations (zero net flow at every vertex), one per basis cycle."""
    index = {(a, b): k for k, (a, b, _) in enumerate(g.edges)}
    out = []
    for cyc in nx.cycle_basis(to_nx(g)):
        f = np.zeros(g.m)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if a < b:
                f[index[(a, b)]] += 1.0
            else:
                f[index[(b, a)]] -= 1.0
        out.append(f)
    return out


def net_outflow(g: WeightedGraph, f: np.ndarray) -> np.ndarray:
    out = np.zeros(g.n)
    for k, (a, b, _) in enumerate(g.edges):
        out[a] += f[k]
        out[b] -= f[k]
    return out


def brute_pinv(L: np.ndarray) -> np.ndarray:
    """Pseudoinverse from an eigendecomposition, dropping the near-zero spectrum."""
    vals, vecs = np.linalg.eigh(L)
    inv = np.array([1.0 / x if x > 1e-9 else 0.0 for x in vals])
    return (vecs * inv) @ vecs.T


def separates(g: WeightedGraph, a: int, b: int, c: int) -> bool:
    """Does removing b disconnect a from c?"""
    h = to_nx(g)
    h.remove_node(b)
    return not nx.has_path(h, a, c)


# ---- hypothesis strategies ----


@st.composite
def connected_graphs(draw, min_n=2, max_n=12, weighted=False, extra=None):
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    edges = {(p, i + 1) for i, p in enumerate(parents)}
    pairs = [(u, v) for u, v in itertools.combinations(range(n), 2) if (u, v) not in edges]
    if pairs:
        k = draw(st.integers(0, min(len(pairs), extra if extra is not None else 2 * n)))
        chosen = draw(st.lists(st.sampled_from(pairs), min_size=k, max_size=k, unique=True))
        edges |= set(chosen)
    if weighted:
        ws = st.floats(0.5, 2.0, allow_nan=False, allow_infinity=False)
        return WeightedGraph(n, [(u, v, draw(ws)) for u, v in sorted(edges)])
    return WeightedGraph(n, sorted(edges))


def exactly_equal_fraction(x, y) -> bool:
    return Fraction(x) == Fraction(y)


def comb2(k: int) -> int:
    return math.comb(k, 2)
