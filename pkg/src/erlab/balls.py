"""ER unit balls, through plain pair queries or the sorted-ball capability."""

from __future__ import annotations

from fractions import Fraction

from .graph import Resistance
from .oracle import Oracle

BALL_TOL = 1e-9


def in_unit_ball(r: Resistance, tol: float = BALL_TOL) -> bool:
    if r.is_infinite:
        return False
    x = r.value
    if isinstance(x, Fraction):
        return x <= 1
    return x <= 1 + tol


def unit_ball(o: Oracle, v: int, *, tol: float = BALL_TOL) -> dict[int, Resistance]:
    """Vertices ``u != v`` with ``R(u, v) <= 1``.

    Costs ``n - 1`` ER queries, or, when the oracle offers sorted balls, a
    doubling sequence of ball requests that stops at the first vertex
    outside the ball.
    """
    if o.n == 1:
        return {}
    if not o.ball_enabled:
        ball = {}
        for u in range(o.n):
            if u != v:
                r = o.er(v, u)
                if in_unit_ball(r, tol):
                    ball[u] = r
        return ball
    k = 1
    while True:
        items = o.sorted_ball(v, k)
        if k == o.n - 1 or not in_unit_ball(items[-1][1], tol):
            return {u: r for u, r in items if in_unit_ball(r, tol)}
        k = min(2 * k, o.n - 1)
