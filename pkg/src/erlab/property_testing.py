"""Randomized property testers driven by ER queries.

Both biconnectivity testers accept biconnected graphs with probability 1
and reject graphs that are eps-far (eps * m edge additions needed) with
probability at least 2/3. Sampling is with replacement and seeded.
"""

from __future__ import annotations

import enum
import math
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .balls import BALL_TOL, unit_ball
from .decomposition import TreeDecomposition, bag_distance, validate_tree_decomposition
from .electrical import all_pairs_er
from .errors import BadParams, DegreeBoundExceeded, InvalidDecomposition
from .graph import WeightedGraph
from .oracle import Oracle, QueryLedger
from .reconstruct import discover_neighbors
from .verify import UNIT_TOL, _close, is_cut_vertex, same_biconnected_component


class Decision(str, enum.Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"


class Reason(str, enum.Enum):
    CUT_VERTEX_FOUND = "CutVertexFound"
    CUT_EDGE_FOUND = "CutEdgeFound"
    SMALL_LOW_DEGREE_COMPONENT = "SmallLowDegreeComponent"
    DIFFERENT_BICONNECTED_COMPONENT = "DifferentBiconnectedComponent"
    DISCONNECTED = "Disconnected"
    TRIANGLE_FOUND = "TriangleFound"
    NO_EVIDENCE = "NoEvidence"


@dataclass
class TestOutcome:
    __test__ = False

    decision: Decision
    reason: Reason
    samples_used: int
    queries: QueryLedger
    witness: object = None
    details: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.decision is Decision.ACCEPT


def _check_eps(eps: float):
    if not 0 < eps <= 1:
        raise BadParams(f"eps must lie in (0, 1], got {eps}")


def _connectivity_precheck(o: Oracle):
    """Query R(0, u) for all u; return the first unreachable vertex or None."""
    bad = None
    for u in range(1, o.n):
        if o.er(0, u).is_infinite and bad is None:
            bad = u
    return bad


def vertex_tester_budget(n: int, eps: float) -> int:
    return (n - 1) + (math.ceil(4 / eps) + 1) * (2 * n - 3)


def test_vertex_biconnectivity(o: Oracle, eps: float, seed=0) -> TestOutcome:
    """Anchor at vertex 0, sample ceil(4/eps) other vertices, reject on any cut evidence."""
    _check_eps(eps)
    before = o.ledger.snapshot()
    n = o.n
    s = math.ceil(4 / eps)

    def done(decision, reason, samples, witness=None):
        return TestOutcome(decision, reason, samples, o.ledger - before, witness)

    bad = _connectivity_precheck(o)
    if bad is not None:
        return done(Decision.REJECT, Reason.DISCONNECTED, 0, (0, bad))
    if n <= 2:
        return done(Decision.ACCEPT, Reason.NO_EVIDENCE, 0)
    rng = np.random.default_rng(seed)
    samples = [int(x) for x in rng.integers(1, n, size=s)]
    cv = is_cut_vertex(o, 0)
    if cv.answer:
        return done(Decision.REJECT, Reason.CUT_VERTEX_FOUND, s, (0, cv.witness))
    for u in samples:
        same = same_biconnected_component(o, 0, u)
        if not same.answer:
            return done(Decision.REJECT, Reason.DIFFERENT_BICONNECTED_COMPONENT, s, (u, same.witness))
    return done(Decision.ACCEPT, Reason.NO_EVIDENCE, s)


def edge_tester_scale(n: int, eps: float) -> float:
    return n / eps**2 + 1 / eps**4


def test_edge_biconnectivity(o: Oracle, eps: float, seed=0) -> TestOutcome:
    """Search for a bridge by ball-limited BFS from ceil(16/eps) random roots.

    A root is abandoned once a visited vertex has more than ceil(4/eps) + 2
    vertices in its unit ball, or more than ceil(4/eps) vertices have been
    visited; either way its edge-biconnected component is not both small
    and low-degree. An incident edge with resistance exactly 1 is a bridge.
    """
    _check_eps(eps)
    before = o.ledger.snapshot()
    n = o.n
    roots_wanted = math.ceil(16 / eps)
    ball_limit = math.ceil(4 / eps) + 2
    visit_limit = math.ceil(4 / eps)

    def done(decision, reason, samples, witness=None, **details):
        used = o.ledger - before
        details["budget_constant"] = used.distinct / edge_tester_scale(n, eps)
        return TestOutcome(decision, reason, samples, used, witness, details)

    bad = _connectivity_precheck(o)
    if bad is not None:
        return done(Decision.REJECT, Reason.DISCONNECTED, 0, (0, bad))
    if n == 1:
        return done(Decision.ACCEPT, Reason.NO_EVIDENCE, 0)
    one = Fraction(1) if o.exact else 1.0
    rng = np.random.default_rng(seed)
    roots = [int(x) for x in rng.integers(0, n, size=roots_wanted)]
    abandoned = 0
    for root in roots:
        seen = {root}
        queue = deque([root])
        visits = 0
        while queue:
            u = queue.popleft()
            ball = unit_ball(o, u)
            if len(ball) + 1 > ball_limit:
                abandoned += 1
                break
            for x in sorted(discover_neighbors(o, u, ball=ball)):
                r = ball[x].value
                if _close(r, one, UNIT_TOL):
                    return done(Decision.REJECT, Reason.CUT_EDGE_FOUND, roots_wanted, (min(u, x), max(u, x)))
                if x not in seen:
                    seen.add(x)
                    queue.append(x)
            visits += 1
            if visits > visit_limit:
                abandoned += 1
                break
    return done(Decision.ACCEPT, Reason.NO_EVIDENCE, roots_wanted, abandoned_roots=abandoned)


test_vertex_biconnectivity.__test__ = False
test_edge_biconnectivity.__test__ = False


@dataclass(frozen=True)
class DensityReport:
    rho: int
    argmax: int
    ball_sizes: tuple[int, ...]


def er_density(g: WeightedGraph, tol: float = BALL_TOL) -> DensityReport:
    """Largest ER unit ball (the center counts) over all vertices."""
    r = all_pairs_er(g).values
    sizes = (r <= 1 + tol).sum(axis=1)
    arg = int(np.argmax(sizes))
    return DensityReport(int(sizes[arg]), arg, tuple(int(x) for x in sizes))


class BoundedDegreeTester(ABC):
    """A tester for the bounded-degree (adjacency list) model.

    ``run`` may only look at the graph through ``degree(v)`` and
    ``neighbor(v, i)`` (``None`` once ``i >= degree(v)``).
    """

    def __init__(self, degree_bound: int, eps: float):
        _check_eps(eps)
        self.degree_bound = degree_bound
        self.eps = eps

    @abstractmethod
    def run(
        self,
        n: int,
        degree: Callable[[int], int],
        neighbor: Callable[[int, int], int | None],
        rng: np.random.Generator,
    ) -> tuple[bool, object]:
        """Return ``(accept, witness)``."""


class TriangleFreenessTester(BoundedDegreeTester):
    """Sample ceil(2/eps) vertices and look for a triangle within radius 2 of each."""

    def run(self, n, degree, neighbor, rng):
        for v in (int(x) for x in rng.integers(0, n, size=math.ceil(2 / self.eps))):
            around = [neighbor(v, i) for i in range(degree(v))]
            close = set(around)
            for x in around:
                for i in range(degree(x)):
                    y = neighbor(x, i)
                    if y != v and y in close:
                        return False, tuple(sorted((v, x, y)))
        return True, None


@dataclass
class _Callbacks:
    adjacency: Callable[[int], list[int]]
    count: int = 0

    def degree(self, v: int) -> int:
        self.count += 1
        return len(self.adjacency(v))

    def neighbor(self, v: int, i: int):
        self.count += 1
        nb = self.adjacency(v)
        return nb[i] if 0 <= i < len(nb) else None


def run_bounded_degree_tester(g: WeightedGraph, t: BoundedDegreeTester, seed=0) -> TestOutcome:
    """Execute ``t`` against plain adjacency lists (the reference side of the adapter)."""
    cb = _Callbacks(lambda v: g.neighbors(v))
    accept, witness = t.run(g.n, cb.degree, cb.neighbor, np.random.default_rng(seed))
    return _tester_outcome(accept, witness, QueryLedger(), {"callbacks": cb.count})


def _tester_outcome(accept, witness, queries, details):
    if accept:
        return TestOutcome(Decision.ACCEPT, Reason.NO_EVIDENCE, 0, queries, None, details)
    return TestOutcome(Decision.REJECT, Reason.TRIANGLE_FOUND, 0, queries, witness, details)


def adapt_bounded_degree_tester(o: Oracle, t: BoundedDegreeTester, seed=0) -> TestOutcome:
    """Run a bounded-degree tester with neighbor lists discovered through ER queries.

    Each vertex's neighborhood is discovered once (unit ball, then Schur
    complement on the ball) and memoised. The outcome's details carry the
    cost report: callbacks, distinct ER queries, the largest ball seen
    (a lower estimate of the ER density), and ``callbacks * (n + rho^2)``.
    """
    before = o.ledger.snapshot()
    memo: dict[int, list[int]] = {}
    rho_seen = 1

    def adjacency(v: int) -> list[int]:
        nonlocal rho_seen
        if v not in memo:
            ball = unit_ball(o, v)
            rho_seen = max(rho_seen, len(ball) + 1)
            nb = sorted(discover_neighbors(o, v, ball=ball))
            if len(nb) > t.degree_bound:
                raise DegreeBoundExceeded(f"vertex {v} has degree {len(nb)} > {t.degree_bound}")
            memo[v] = nb
        return memo[v]

    cb = _Callbacks(adjacency)
    accept, witness = t.run(o.n, cb.degree, cb.neighbor, np.random.default_rng(seed))
    used = o.ledger - before
    bound = cb.count * (o.n + rho_seen**2)
    details = {
        "callbacks": cb.count,
        "discovered_vertices": len(memo),
        "rho_observed": rho_seen,
        "cost_bound": bound,
        "within_bound": used.distinct <= bound,
    }
    return _tester_outcome(accept, witness, used, details)


@dataclass(frozen=True)
class TdDistanceReport:
    max_ratio: float
    factor: float
    pairs_checked: int
    holds: bool
    worst_pair: tuple[int, int] | None


def td_distance_bound_check(
    g: WeightedGraph, td: TreeDecomposition, b_T: int | None = None, samples: int = 200, seed=0
) -> TdDistanceReport:
    """Check ``r_T(s, t) <= 4 * b_T * d_G * w_T * R(s, t)`` on sampled vertex pairs.

    ``r_T`` is the largest tree distance between a bag holding ``s`` and a
    bag holding ``t``; ``w_T`` is the decomposition width and ``d_G`` the
    maximum degree. When ``samples`` covers all pairs every pair is checked.
    """
    verdict = validate_tree_decomposition(g, td)
    if not verdict.valid:
        raise InvalidDecomposition(verdict.message)
    if b_T is None:
        b_T = td.max_bags_per_vertex
    if td.max_bags_per_vertex > b_T:
        raise BadParams(f"some vertex lies in {td.max_bags_per_vertex} > b_T = {b_T} bags")
    factor = 4 * b_T * g.max_degree * td.width
    r = all_pairs_er(g).values
    all_pairs = [(s, t) for s in range(g.n) for t in range(s + 1, g.n)]
    if samples >= len(all_pairs):
        pairs = all_pairs
    else:
        rng = np.random.default_rng(seed)
        pairs = [all_pairs[int(i)] for i in rng.integers(0, len(all_pairs), size=samples)]
    worst, worst_pair, holds = 0.0, None, True
    for s, t in pairs:
        far = bag_distance(td, s, t).farthest
        ratio = float(far / r[s, t])
        if ratio > worst:
            worst, worst_pair = ratio, (s, t)
        if far > factor * r[s, t] + 1e-9:
            holds = False
    return TdDistanceReport(worst, float(factor), len(pairs), holds, worst_pair)
