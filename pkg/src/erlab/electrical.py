"""Laplacian linear algebra: effective resistance, electrical flows, Schur complements.

All dense; intended for graphs with at most a few hundred vertices.
Edges are oriented from the lower to the higher vertex id wherever a sign
convention is needed (incidence matrix, flow values).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadParams, DisconnectedPair
from .graph import Resistance, WeightedGraph

EXACT_MAX_N = 100


@dataclass(frozen=True)
class Tolerance:
    """Relative/absolute closeness test shared by the numeric routines."""

    rel: float = 1e-8
    abs: float = 1e-10

    def close(self, a, b) -> bool:
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a == b
        a, b = float(a), float(b)
        return abs(a - b) <= max(self.abs, self.rel * max(abs(a), abs(b)))


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class LaplacianBundle:
    L: np.ndarray
    L_reg: np.ndarray
    L_pinv: np.ndarray
    incidence: np.ndarray
    W_diag: np.ndarray


def laplacian(g: WeightedGraph) -> np.ndarray:
    a = g.adjacency_matrix()
    return np.diag(a.sum(axis=1)) - a


def incidence_matrix(g: WeightedGraph) -> np.ndarray:
    """Signed n x m incidence matrix: +1 at the lower endpoint, -1 at the higher."""
    b = np.zeros((g.n, g.m))
    for k, (u, v, _) in enumerate(g.edges):
        b[u, k] = 1.0
        b[v, k] = -1.0
    return b


def laplacian_bundle(g: WeightedGraph) -> LaplacianBundle:
    n = g.n
    L = laplacian(g)
    L_reg = L + np.full((n, n), 1.0 / n)
    if g.is_connected:
        L_pinv = np.linalg.inv(L_reg) - 1.0 / n
    else:
        L_pinv = np.linalg.pinv(L, hermitian=True)
    L_pinv = (L_pinv + L_pinv.T) / 2
    return LaplacianBundle(
        L=L,
        L_reg=L_reg,
        L_pinv=L_pinv,
        incidence=incidence_matrix(g),
        W_diag=np.array([w for _, _, w in g.edges]),
    )


def _component_inverses(g: WeightedGraph):
    """Yield (vertices, inverse of the component's regularized Laplacian)."""
    L = laplacian(g)
    for comp in g.components:
        idx = np.array(comp)
        k = len(comp)
        sub = L[np.ix_(idx, idx)] + 1.0 / k
        yield idx, np.linalg.inv(sub)


@dataclass(frozen=True, eq=False)
class ErMatrix:
    """Pairwise effective resistances. Cross-component entries hold ``inf``.

    Indexing with a pair returns a tagged :class:`Resistance`; the raw array
    is available as ``values`` for vectorised work.
    """

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, pair) -> Resistance:
        u, v = pair
        x = self.values[u, v]
        return Resistance.infinite() if math.isinf(x) else Resistance(float(x))

    @property
    def all_finite(self) -> bool:
        return bool(np.isfinite(self.values).all())

    def triangle_violation(self) -> float:
        """Largest amount by which R(a,c) exceeds R(a,b) + R(b,c) over finite triples."""
        r = self.values
        worst = 0.0
        for b in range(self.n):
            via = r[:, b][:, None] + r[b, :][None, :]
            diff = np.where(np.isfinite(via), r - via, -np.inf)
            worst = max(worst, float(diff.max()))
        return worst


def all_pairs_er(g: WeightedGraph) -> ErMatrix:
    r = np.full((g.n, g.n), np.inf)
    for idx, inv in _component_inverses(g):
        d = np.diag(inv)
        block = d[:, None] + d[None, :] - (inv + inv.T)
        np.fill_diagonal(block, 0.0)
        r[np.ix_(idx, idx)] = np.maximum(block, 0.0)
    np.fill_diagonal(r, 0.0)
    return ErMatrix(r)


def effective_resistance(g: WeightedGraph, u: int, v: int) -> Resistance:
    if u == v:
        return Resistance(0.0)
    if g.component_of[u] != g.component_of[v]:
        return Resistance.infinite()
    comp = g.components[g.component_of[u]]
    pos = {x: i for i, x in enumerate(comp)}
    idx = np.array(comp)
    sub = laplacian(g)[np.ix_(idx, idx)] + 1.0 / len(comp)
    b = np.zeros(len(comp))
    b[pos[u]], b[pos[v]] = 1.0, -1.0
    return Resistance(float(max(b @ np.linalg.solve(sub, b), 0.0)))


def pinv_from_er(r: np.ndarray) -> np.ndarray:
    """Recover the Laplacian pseudoinverse from a finite ER matrix by double centering."""
    n = r.shape[0]
    p = np.eye(n) - 1.0 / n
    return -0.5 * p @ r @ p


def laplacian_from_er(r: np.ndarray) -> np.ndarray:
    """Laplacian of the unique connected graph whose ER matrix is ``r``."""
    n = r.shape[0]
    reg_inv = pinv_from_er(r) + 1.0 / n
    L = np.linalg.inv(reg_inv) - 1.0 / n
    return (L + L.T) / 2


def graph_from_laplacian(L: np.ndarray, rel_floor: float = 1e-7) -> WeightedGraph:
    """Read edge weights off ``-L``; entries at or below ``rel_floor * max(diag L)`` are non-edges."""
    n = L.shape[0]
    floor = rel_floor * max(float(np.max(np.diag(L))), 0.0) if n else 0.0
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            w = -L[u, v]
            if w > floor:
                edges.append((u, v, w))
    return WeightedGraph(n, edges)


@dataclass(frozen=True)
class UnitFlow:
    source: int
    sink: int
    values: np.ndarray  # one entry per edge of g.edges, positive = lower id -> higher id
    energy: float


def flow_energy(g: WeightedGraph, values: np.ndarray) -> float:
    w = np.array([w for _, _, w in g.edges])
    return float(np.sum(np.asarray(values) ** 2 / w))


def electrical_flow(g: WeightedGraph, u: int, v: int) -> UnitFlow:
    if u == v:
        raise BadParams("electrical flow needs distinct endpoints")
    if g.component_of[u] != g.component_of[v]:
        raise DisconnectedPair(f"{u} and {v} are in different components")
    bundle = laplacian_bundle(g)
    b = np.zeros(g.n)
    b[u], b[v] = 1.0, -1.0
    p = bundle.L_pinv @ b
    values = np.array([w * (p[a] - p[c]) for a, c, w in g.edges])
    return UnitFlow(u, v, values, flow_energy(g, values))


class Reduced(NamedTuple):
    """A graph on ``0..len(ids)-1`` whose vertex ``i`` stands for original vertex ``ids[i]``."""

    graph: WeightedGraph
    ids: list[int]


def schur_complement(g: WeightedGraph, keep: Sequence[int], rel_floor: float = 1e-12) -> Reduced:
    """Eliminate every vertex outside ``keep`` (ids kept in ascending order)."""
    ids = sorted(set(keep))
    if not ids:
        raise BadParams("keep must be nonempty")
    rest = [x for x in range(g.n) if x not in set(ids)]
    L = laplacian(g)
    lu = L[np.ix_(ids, ids)]
    if rest:
        lur = L[np.ix_(ids, rest)]
        lrr = L[np.ix_(rest, rest)]
        lu = lu - lur @ np.linalg.pinv(lrr, hermitian=True) @ lur.T
    return Reduced(graph_from_laplacian((lu + lu.T) / 2, rel_floor), ids)


# exact rational backend


def _fraction_inverse(a: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse of a nonsingular rational matrix."""
    k = len(a)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(a)]
    for col in range(k):
        piv = next(r for r in range(col, k) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        prow = [x / pv for x in aug[col]]
        aug[col] = prow
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                row = aug[r]
                aug[r] = [x - f * y for x, y in zip(row, prow)]
    return [row[k:] for row in aug]


def exact_all_pairs_er(g: WeightedGraph) -> list[list[Fraction | None]]:
    """Rational ER matrix via exact inversion of each component's regularized Laplacian.

    Weights are converted with ``Fraction(w)``, so unit and dyadic weights stay exact.
    ``None`` marks cross-component pairs.
    """
    if g.n > EXACT_MAX_N:
        raise BadParams(f"exact mode supports n <= {EXACT_MAX_N}, got {g.n}")
    out: list[list[Fraction | None]] = [[None] * g.n for _ in range(g.n)]
    for comp in g.components:
        k = len(comp)
        pos = {x: i for i, x in enumerate(comp)}
        reg = [[Fraction(1, k)] * k for _ in range(k)]
        for a, b, w in g.edges:
            if a in pos:
                i, j, fw = pos[a], pos[b], Fraction(w)
                reg[i][i] += fw
                reg[j][j] += fw
                reg[i][j] -= fw
                reg[j][i] -= fw
        inv = _fraction_inverse(reg)
        for i, x in enumerate(comp):
            for j, y in enumerate(comp):
                out[x][y] = inv[i][i] + inv[j][j] - 2 * inv[i][j]
    return out
