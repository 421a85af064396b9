"""Exact decision procedures with linear ER query budgets.

Each procedure spends its full budget (no early exit), so the distinct-query
count is a function of ``n`` alone: ``n - 1`` for the tree and equality
tests and ``2n - 3`` for the cut-vertex, biconnected-membership and
cut-edge tests. Anchor vertices are always the lowest eligible ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .electrical import all_pairs_er
from .errors import BadParams, Disconnected, WeightedInput
from .graph import Resistance, WeightedGraph
from .oracle import Oracle, QueryLedger

TIGHT_TOL = 1e-8
INTEGRAL_TOL = 1e-6
UNIT_TOL = 1e-8
UNWEIGHTED_ONLY_NOTE = "characterisation proved for unweighted graphs"


@dataclass(frozen=True)
class Verdict:
    answer: bool
    witness: object = None
    queries: QueryLedger = field(default_factory=QueryLedger)
    reason: str | None = None
    notes: tuple[str, ...] = ()

    def __bool__(self):
        return self.answer


def _close(a, b, tol: float) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= tol


def _is_integral(x, tol: float = INTEGRAL_TOL) -> bool:
    if isinstance(x, Fraction):
        return x.denominator == 1
    return abs(x - round(x)) < tol


def _finite(r: Resistance):
    if r.is_infinite:
        raise Disconnected("hidden graph is disconnected (infinite resistance observed)")
    return r.value


def is_tree(o: Oracle, *, weighted: bool = False, tol: float = INTEGRAL_TOL) -> Verdict:
    """Tree test for unweighted graphs: all ``R(0, u)`` finite and integral.

    Uses the fact that a connected unweighted graph has a cycle exactly when
    some resistance from a fixed vertex is fractional.
    """
    if weighted:
        raise WeightedInput("the tree test relies on integrality, which needs unit weights")
    before = o.ledger.snapshot()
    answers = [(u, o.er(0, u)) for u in range(1, o.n)]
    witness, reason = None, None
    for u, r in answers:
        if r.is_infinite:
            witness, reason = u, "Disconnected"
            break
    if witness is None:
        for u, r in answers:
            if not _is_integral(r.value, tol):
                witness, reason = u, "NonIntegralResistance"
                break
    return Verdict(witness is None, witness, o.ledger - before, reason)


def equal_monotone(o: Oracle, g_known: WeightedGraph, *, tol: float = 1e-8) -> Verdict:
    """Decide hidden == ``g_known``, given the weights are ordered one way or the other.

    The caller guarantees ``w_known <= w_hidden`` on every pair, or ``>=`` on every
    pair; without that ordering a "true" answer proves nothing. Compares
    ``R(0, u)`` for every ``u`` with relative tolerance ``tol``.
    """
    if g_known.n != o.n:
        raise BadParams(f"known graph has {g_known.n} vertices, oracle has {o.n}")
    before = o.ledger.snapshot()
    known = all_pairs_er(g_known)
    witness = None
    for u in range(1, o.n):
        hidden = o.er(0, u)
        mine = known[0, u]
        if witness is not None:
            continue
        if hidden.is_infinite or mine.is_infinite:
            if hidden.is_infinite != mine.is_infinite:
                witness = u
        elif abs(float(hidden) - float(mine)) > tol * max(1.0, abs(float(mine))):
            witness = u
    reason = None if witness is None else "ResistanceDiffers"
    return Verdict(witness is None, witness, o.ledger - before, reason)


def is_cut_vertex(o: Oracle, v: int, *, weighted: bool = False, tol: float = TIGHT_TOL) -> Verdict:
    """``v`` is a cut vertex iff ``R(u0, w) = R(u0, v) + R(v, w)`` for some ``w``.

    ``u0`` is the lowest id other than ``v``. Exact comparisons when the oracle
    returns rationals, absolute ``tol`` otherwise.
    """
    notes = (UNWEIGHTED_ONLY_NOTE,) if weighted else ()
    before = o.ledger.snapshot()
    if o.n <= 2:
        return Verdict(False, None, o.ledger - before, None, notes)
    u0 = 0 if v != 0 else 1
    r_uv = _finite(o.er(u0, v))
    witness = None
    for w in range(o.n):
        if w in (u0, v):
            continue
        r_uw = _finite(o.er(u0, w))
        r_vw = _finite(o.er(v, w))
        if witness is None and _close(r_uw, r_uv + r_vw, tol):
            witness = w
    reason = "CutVertexFound" if witness is not None else None
    return Verdict(witness is not None, witness, o.ledger - before, reason, notes)


def same_biconnected_component(o: Oracle, a: int, b: int, *, weighted: bool = False, tol: float = TIGHT_TOL) -> Verdict:
    """False iff some ``r`` makes ``R(a, r) + R(r, b) = R(a, b)``; the witness is that separating ``r``."""
    if a == b:
        raise BadParams("a and b must differ")
    notes = (UNWEIGHTED_ONLY_NOTE,) if weighted else ()
    before = o.ledger.snapshot()
    r_ab = _finite(o.er(a, b))
    witness = None
    for r in range(o.n):
        if r in (a, b):
            continue
        r_ar = _finite(o.er(a, r))
        r_rb = _finite(o.er(r, b))
        if witness is None and _close(r_ar + r_rb, r_ab, tol):
            witness = r
    reason = "DifferentBiconnectedComponent" if witness is not None else None
    return Verdict(witness is None, witness, o.ledger - before, reason, notes)


def is_cut_edge(o: Oracle, a: int, b: int, *, weighted: bool = False, tol: float = UNIT_TOL) -> Verdict:
    """Unweighted cut-edge test: ``R(a, b) = 1`` and ``|R(a, x) - R(b, x)| = 1`` for all other ``x``.

    The witness of a negative answer is the first offending vertex (``b`` when
    ``R(a, b) != 1``).
    """
    if weighted:
        raise WeightedInput("the unit-difference criterion is only established for unweighted graphs")
    if a == b:
        raise BadParams("a and b must differ")
    before = o.ledger.snapshot()
    one = Fraction(1) if o.exact else 1.0
    r_ab = _finite(o.er(a, b))
    witness = None if _close(r_ab, one, tol) else b
    for x in range(o.n):
        if x in (a, b):
            continue
        diff = _finite(o.er(a, x)) - _finite(o.er(b, x))
        if witness is None and not _close(abs(diff), one, tol):
            witness = x
    reason = "NotACutEdge" if witness is not None else "CutEdgeFound"
    return Verdict(witness is None, witness, o.ledger - before, reason)
