"""Recovering hidden graphs from ER queries.

Full reconstruction inverts the double-centred ER matrix; everything else
builds on reconstructing Schur complements of small vertex sets and gluing
them back together with the Schur complement identity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .balls import unit_ball
from .decomposition import TreeDecomposition, validate_tree_decomposition
from .electrical import Reduced, all_pairs_er, graph_from_laplacian, laplacian, laplacian_from_er
from .errors import (
    AmbiguousCompletion,
    BadParams,
    Disconnected,
    InconsistentKnownPart,
    InvalidDecomposition,
    NoConsistentCompletion,
    WeightedInput,
)
from .graph import WeightedGraph
from .oracle import Oracle, QueryLedger

W_FLOOR = 1e-7


@dataclass
class ReconstructionResult:
    graph: WeightedGraph
    queries: QueryLedger
    max_weight_error: float | None = None
    details: dict = field(default_factory=dict)

    def compare(self, truth: WeightedGraph) -> "ReconstructionResult":
        self.max_weight_error = self.graph.max_weight_error(truth)
        return self


def _er_block(o: Oracle, ids: Sequence[int]) -> np.ndarray:
    """Query every pair of ``ids`` (in order); raise on an infinite answer."""
    k = len(ids)
    r = np.zeros((k, k))
    for i, j in itertools.combinations(range(k), 2):
        ans = o.er(ids[i], ids[j])
        if ans.is_infinite:
            raise Disconnected(f"vertices {ids[i]} and {ids[j]} are in different components")
        r[i, j] = r[j, i] = float(ans.value)
    return r


def _schur_laplacian(o: Oracle, ids: Sequence[int], seen: list | None = None) -> np.ndarray:
    if len(ids) == 1:
        return np.zeros((1, 1))
    r = _er_block(o, ids)
    if seen is not None:
        seen.append((list(ids), r))
    return laplacian_from_er(r)


def reconstruct_full(o: Oracle, *, rel_floor: float = W_FLOOR) -> ReconstructionResult:
    """Recover the whole graph from all ``n choose 2`` resistances."""
    before = o.ledger.snapshot()
    L = _schur_laplacian(o, range(o.n))
    return ReconstructionResult(graph_from_laplacian(L, rel_floor), o.ledger - before)


def reconstruct_schur(o: Oracle, keep: Iterable[int], *, rel_floor: float = W_FLOOR) -> Reduced:
    """Schur complement of the hidden graph onto ``keep`` from ``|keep| choose 2`` queries."""
    ids = sorted(set(keep))
    if len(ids) < 2:
        raise BadParams("keep needs at least two vertices")
    return Reduced(graph_from_laplacian(_schur_laplacian(o, ids), rel_floor), ids)


def discover_neighbors(o: Oracle, v: int, *, ball: dict | None = None, unit_tol: float = 1e-6) -> dict[int, float]:
    """Neighbors of ``v`` in an unweighted hidden graph, with their recovered weights.

    Every neighbor sits in the ER unit ball of ``v`` and keeps its edge to ``v``
    in the Schur complement onto that ball, so reading ``v``'s row of the
    reconstructed complement gives the neighborhood. A recovered weight that
    is not 1 means the hidden graph is weighted and raises ``WeightedInput``.
    """
    if ball is None:
        ball = unit_ball(o, v)
    if not ball:
        if o.n == 1:
            return {}
        raise Disconnected(f"vertex {v} has no neighbor, so the hidden graph is disconnected")
    red = reconstruct_schur(o, [v, *ball])
    me = red.ids.index(v)
    out = {}
    for j, u in enumerate(red.ids):
        if j != me and red.graph.has_edge(me, j):
            w = red.graph.weight(me, j)
            if abs(w - 1.0) > unit_tol:
                raise WeightedInput(f"edge ({v}, {u}) has recovered weight {w:.6g}, expected 1")
            out[u] = w
    return out


class _Step(NamedTuple):
    interior: list[int]  # U = B \ P, eliminated at this step
    bag: list[int]  # B, sorted
    rows: np.ndarray  # L'(U, B) with columns in ``bag`` order


def reconstruct_from_td(o: Oracle, td: TreeDecomposition, *, rel_floor: float = W_FLOOR) -> ReconstructionResult:
    """Reconstruct from a tree decomposition with at most ``#bags * C(width+1, 2)`` queries.

    Repeatedly takes the lowest-index leaf bag B with neighbor P. The rows of
    the vertices U = B \\ P are read from the Schur complement onto B, U is
    eliminated, and B is removed from the tree. The remaining bag is
    reconstructed directly and the eliminated rows are added back in reverse
    order through ``L(rest, rest) = L_rest + L(rest, U) L(U, U)^+ L(U, rest)``.
    """
    if td.vertices != frozenset(range(o.n)):
        raise InvalidDecomposition("bags must cover exactly the vertices 0..n-1")
    before = o.ledger.snapshot()
    alive = set(range(len(td.bags)))
    nbrs = {i: set(a) for i, a in enumerate(td.adjacency)}
    steps: list[_Step] = []
    seen: list = []
    dropped = processed = 0
    while len(alive) > 1:
        leaf = min(i for i in alive if len(nbrs[i]) == 1)
        (parent,) = nbrs[leaf]
        bag = sorted(td.bags[leaf])
        interior = sorted(td.bags[leaf] - td.bags[parent])
        alive.remove(leaf)
        nbrs[parent].discard(leaf)
        del nbrs[leaf]
        if not interior:
            dropped += 1
            continue
        processed += 1
        L_bag = _schur_laplacian(o, bag, seen)
        pos = [bag.index(u) for u in interior]
        steps.append(_Step(interior, bag, L_bag[pos, :]))
    (root,) = alive
    eliminated = {u for s in steps for u in s.interior}
    cur_ids = sorted(td.bags[root])
    if set(cur_ids) | eliminated != set(range(o.n)) or set(cur_ids) & eliminated:
        raise InvalidDecomposition("vertex elimination order is inconsistent with the bags")
    L_cur = _schur_laplacian(o, cur_ids, seen)
    processed += 1

    for step in reversed(steps):
        k, m = len(step.interior), len(cur_ids)
        col = {x: i for i, x in enumerate(cur_ids)}
        in_u = {x: i for i, x in enumerate(step.interior)}
        l_uu = np.zeros((k, k))
        l_ur = np.zeros((k, m))
        for j, x in enumerate(step.bag):
            if x in in_u:
                l_uu[:, in_u[x]] = step.rows[:, j]
            else:
                l_ur[:, col[x]] = step.rows[:, j]
        l_rr = L_cur + l_ur.T @ np.linalg.pinv(l_uu, hermitian=True) @ l_ur
        L_new = np.block([[l_rr, l_ur.T], [l_ur, l_uu]])
        cur_ids = cur_ids + step.interior
        L_cur = (L_new + L_new.T) / 2

    order = np.argsort(cur_ids)
    L = L_cur[np.ix_(order, order)]
    graph = graph_from_laplacian(L, rel_floor)
    verdict = validate_tree_decomposition(graph, td)
    if not verdict.valid:
        raise InvalidDecomposition(f"recovered graph contradicts the decomposition: {verdict.message}")
    if graph.is_connected:
        recovered = all_pairs_er(graph).values
        for ids, r in seen:
            sub = recovered[np.ix_(ids, ids)]
            if not np.allclose(sub, r, rtol=1e-6, atol=1e-9):
                raise InvalidDecomposition("recovered graph does not reproduce the queried resistances")
    else:
        raise InvalidDecomposition("recovered graph is disconnected")
    details = {"bags": len(td.bags), "processed_bags": processed, "dropped_bags": dropped, "width": td.width}
    return ReconstructionResult(graph, o.ledger - before, details=details)


class CompletionInstance:
    """Adjacency matrix with ``k`` unknown entries and a finite set of candidate weights.

    ``known`` holds every known positive weight; all other pairs outside
    ``unknown`` are known non-edges. A weight of 0 in ``weight_set`` means
    "no edge".
    """

    def __init__(self, known: WeightedGraph, unknown: Iterable[tuple[int, int]], weight_set: Iterable[float] = (0.0, 1.0)):
        self.n = known.n
        self.known = known
        unk = []
        for u, v in unknown:
            u, v = int(u), int(v)
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise BadParams(f"invalid unknown pair ({u}, {v})")
            key = (min(u, v), max(u, v))
            if known.has_edge(*key):
                raise BadParams(f"pair {key} is both known and unknown")
            if key in unk:
                raise BadParams(f"pair {key} listed twice")
            unk.append(key)
        self.unknown = tuple(unk)
        self.weight_set = tuple(sorted({float(w) for w in weight_set}))
        if not self.weight_set or any(w < 0 for w in self.weight_set):
            raise BadParams("weight set must be nonempty and nonnegative")
        if not self.completion([max(self.weight_set)] * self.k).is_connected:
            raise BadParams("no completion of this instance is connected")

    @property
    def k(self) -> int:
        return len(self.unknown)

    def completion(self, weights: Sequence[float]) -> WeightedGraph:
        edges = list(self.known.edges)
        edges += [(u, v, w) for (u, v), w in zip(self.unknown, weights) if w > 0]
        return WeightedGraph(self.n, edges)

    @classmethod
    def from_hidden(cls, hidden: WeightedGraph, unknown, weight_set=(0.0, 1.0)) -> "CompletionInstance":
        """Hide the given pairs of ``hidden`` (test and experiment helper)."""
        hide = {(min(u, v), max(u, v)) for u, v in unknown}
        known = WeightedGraph(hidden.n, [(u, v, w) for u, v, w in hidden.edges if (u, v) not in hide])
        return cls(known, unknown, weight_set)


def complete_quadratic(o: Oracle, inst: CompletionInstance, *, tol: float = 1e-6, rel_floor: float = W_FLOOR) -> ReconstructionResult:
    """Fill the unknown entries from the Schur complement onto their endpoints.

    Queries all pairs of the set U of endpoints (at most ``C(2k, 2)``), then
    solves ``L(U, U) = L_U + L(U, rest) L(rest, rest)^+ L(rest, U)`` where
    the right-hand blocks are known.
    """
    before = o.ledger.snapshot()
    if inst.k == 0:
        return ReconstructionResult(inst.known, o.ledger - before, details={"endpoints": 0})
    U = sorted({x for pair in inst.unknown for x in pair})
    rest = [x for x in range(inst.n) if x not in set(U)]
    L_U = _schur_laplacian(o, U)
    L_known = laplacian(inst.known)
    if rest:
        l_ur = L_known[np.ix_(U, rest)]
        l_rr = L_known[np.ix_(rest, rest)]
        l_uu = L_U + l_ur @ np.linalg.pinv(l_rr, hermitian=True) @ l_ur.T
    else:
        l_uu = L_U
    pos = {x: i for i, x in enumerate(U)}
    scale = max(1.0, float(np.max(np.abs(np.diag(l_uu)))))
    unknown = set(inst.unknown)
    for a, b in itertools.combinations(U, 2):
        if (a, b) in unknown:
            continue
        got = -l_uu[pos[a], pos[b]]
        if abs(got - inst.known.weight(a, b)) > tol * scale:
            raise InconsistentKnownPart(f"pair ({a}, {b}) recovered as {got:.6g}, known {inst.known.weight(a, b):.6g}")
    floor = rel_floor * float(np.max(np.diag(l_uu)))
    weights = []
    for a, b in inst.unknown:
        w = -l_uu[pos[a], pos[b]]
        weights.append(w if w > floor else 0.0)
    details = {"endpoints": len(U), "weights": dict(zip(inst.unknown, weights))}
    return ReconstructionResult(inst.completion(weights), o.ledger - before, details=details)


def _regularized_inverse(g: WeightedGraph) -> np.ndarray:
    return np.linalg.inv(laplacian(g) + 1.0 / g.n)


def _er_on_pairs(g: WeightedGraph, pairs) -> np.ndarray:
    inv = _regularized_inverse(g)
    return np.array([inv[u, u] + inv[v, v] - 2 * inv[u, v] for u, v in pairs])


def complete_exhaustive(o: Oracle, inst: CompletionInstance, *, rel_tol: float = 1e-6) -> ReconstructionResult:
    """Fill the unknown entries with exactly ``k`` queries by trying all ``s^k`` assignments.

    Every connected candidate is checked; all matches are collected before
    deciding, so an ambiguous tolerance is reported rather than tie-broken.
    """
    before = o.ledger.snapshot()
    observed = []
    for u, v in inst.unknown:
        r = o.er(u, v)
        if r.is_infinite:
            raise Disconnected(f"pair ({u}, {v}) has infinite resistance")
        observed.append(float(r.value))
    observed = np.array(observed)
    matches, evaluated, skipped = [], 0, 0
    for weights in itertools.product(inst.weight_set, repeat=inst.k):
        cand = inst.completion(weights)
        if not cand.is_connected:
            skipped += 1
            continue
        evaluated += 1
        got = _er_on_pairs(cand, inst.unknown)
        if np.all(np.abs(got - observed) <= rel_tol * observed):
            matches.append(weights)
    if not matches:
        raise NoConsistentCompletion("no candidate assignment reproduces the queried resistances")
    if len(matches) > 1:
        raise AmbiguousCompletion(f"{len(matches)} assignments match within tolerance", matches)
    details = {
        "candidates": len(inst.weight_set) ** inst.k,
        "evaluated": evaluated,
        "skipped_disconnected": skipped,
        "weights": dict(zip(inst.unknown, matches[0])),
    }
    return ReconstructionResult(inst.completion(matches[0]), o.ledger - before, details=details)


def logdet_directional_derivative(g: WeightedGraph, i: int, j: int) -> float:
    """Derivative of ``log det`` at the regularized Laplacian in the direction of the edge Laplacian of (i, j).

    Equals ``trace(L_reg^{-1} L_ij)``, which is the effective resistance R(i, j).
    """
    if not g.is_connected:
        raise Disconnected("the regularized Laplacian is singular for disconnected graphs")
    inv = _regularized_inverse(g)
    return float(inv[i, i] + inv[j, j] - inv[i, j] - inv[j, i])


def edge_laplacian(n: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((n, n))
    m[i, i] = m[j, j] = 1.0
    m[i, j] = m[j, i] = -1.0
    return m


def logdet(matrix: np.ndarray) -> float:
    sign, value = np.linalg.slogdet(matrix)
    return value if sign > 0 else -math.inf


class UniquenessCount(NamedTuple):
    max_group: int
    connected_completions: int


def uniqueness_brute_force(
    n: int, known: WeightedGraph, unknown: Sequence[tuple[int, int]], weight_set=(0.0, 1.0), *, decimals: int = 9
) -> UniquenessCount:
    """Largest group of connected completions sharing the same ER vector on ``unknown``.

    Resistances are rounded to ``decimals`` places before grouping. A value of 1
    means the queried resistances pin the completion down uniquely.
    """
    if n > 6:
        raise BadParams("brute force is limited to n <= 6")
    if known.n != n:
        raise BadParams("known graph has the wrong vertex count")
    groups: dict[tuple, int] = {}
    connected = 0
    for weights in itertools.product(weight_set, repeat=len(unknown)):
        edges = list(known.edges) + [(u, v, w) for (u, v), w in zip(unknown, weights) if w > 0]
        g = WeightedGraph(n, edges)
        if not g.is_connected:
            continue
        connected += 1
        key = tuple(np.round(_er_on_pairs(g, unknown), decimals)) if unknown else ()
        groups[key] = groups.get(key, 0) + 1
    return UniquenessCount(max(groups.values(), default=0), connected)
