"""Query oracles over a hidden graph, with a ledger of every query spent.

Inference code only ever talks to an :class:`Oracle`. :class:`ErOracle`
answers from a hidden :class:`WeightedGraph`; :class:`TableOracle` answers
from a precomputed table and never sees a graph at all, which is how the
tests check that algorithms don't peek.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from typing import Mapping

from .electrical import all_pairs_er, exact_all_pairs_er
from .errors import BadParams, CapabilityError, SameVertex
from .graph import Resistance, WeightedGraph

FLOAT = "float"
EXACT = "exact"


@dataclass
class QueryLedger:
    distinct: int = 0
    total: int = 0
    sp_distinct: int = 0
    sp_total: int = 0
    ball_requests: int = 0

    def snapshot(self) -> "QueryLedger":
        return replace(self)

    def as_dict(self) -> dict:
        return asdict(self)

    def __sub__(self, other: "QueryLedger") -> "QueryLedger":
        return QueryLedger(**{k: getattr(self, k) - getattr(other, k) for k in asdict(self)})


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def format_answer(x) -> str:
    if isinstance(x, Resistance):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return str(x)


def parse_answer(text: str) -> Resistance:
    if text == "inf":
        return Resistance.infinite()
    if "/" in text or text.lstrip("-").isdigit():
        return Resistance(Fraction(text))
    return Resistance(float(text))


class Oracle:
    """Caching, ledger and transcript logic shared by all oracles.

    Subclasses provide ``_er`` (and optionally ``_sp`` / ``_row``).
    """

    def __init__(self, n: int, *, ball: bool = False, sp: bool = True, mode: str = FLOAT):
        self.n = n
        self.ledger = QueryLedger()
        self.ball_enabled = ball
        self.sp_enabled = sp
        self.mode = mode
        self.transcript: list[tuple[str, int, int, object]] = []
        self._cache: dict[tuple[int, int], Resistance] = {}
        self._sp_cache: dict[tuple[int, int], float] = {}

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    def _check(self, u: int, v: int):
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise BadParams(f"vertex pair ({u}, {v}) out of range for n={self.n}")
        if u == v:
            raise SameVertex(f"query on identical vertices {u}")

    def er(self, u: int, v: int) -> Resistance:
        self._check(u, v)
        key = _key(u, v)
        self.ledger.total += 1
        ans = self._cache.get(key)
        if ans is None:
            ans = self._er(*key)
            self._cache[key] = ans
            self.ledger.distinct += 1
        self.transcript.append(("er", u, v, ans))
        return ans

    def sp(self, u: int, v: int) -> float:
        """Unweighted hop distance; ``math.inf`` across components."""
        if not self.sp_enabled:
            raise CapabilityError("this oracle does not answer shortest-path queries")
        self._check(u, v)
        key = _key(u, v)
        self.ledger.sp_total += 1
        if key not in self._sp_cache:
            self._sp_cache[key] = self._sp(*key)
            self.ledger.sp_distinct += 1
        ans = self._sp_cache[key]
        self.transcript.append(("sp", u, v, ans))
        return ans

    def sorted_ball(self, v: int, k: int) -> list[tuple[int, Resistance]]:
        """The ``k`` vertices nearest to ``v`` in ER order, ties by ascending id."""
        if not self.ball_enabled:
            raise CapabilityError("sorted-ball queries are not enabled on this oracle")
        if not 0 <= k <= self.n - 1:
            raise BadParams(f"k must lie in [0, {self.n - 1}]")
        row = sorted((r, u) for u, r in self._row(v).items() if u != v)
        self.ledger.ball_requests += k
        return [(u, r) for r, u in row[:k]]

    def _er(self, u: int, v: int) -> Resistance:
        raise NotImplementedError

    def _sp(self, u: int, v: int) -> float:
        raise CapabilityError("this oracle has no shortest-path table")

    def _row(self, v: int) -> dict[int, Resistance]:
        return {u: self._er(*_key(u, v)) for u in range(self.n) if u != v}

    def dump_transcript(self) -> str:
        """One line per query in order: ``q er <u> <v> <answer>`` with 1-indexed vertices."""
        return "".join(f"q {kind} {u + 1} {v + 1} {format_answer(a)}\n" for kind, u, v, a in self.transcript)


class ErOracle(Oracle):
    """Oracle backed by a hidden graph. Answers are computed once, on first use."""

    def __init__(self, hidden: WeightedGraph, *, mode: str = FLOAT, ball: bool = False, sp: bool = True):
        if mode not in (FLOAT, EXACT):
            raise BadParams(f"unknown oracle mode {mode!r}")
        super().__init__(hidden.n, ball=ball, sp=sp, mode=mode)
        self._hidden = hidden
        self._table = None
        self._hops: dict[int, list[float]] = {}

    def _ensure_table(self):
        if self._table is None:
            if self.exact:
                self._table = exact_all_pairs_er(self._hidden)
            else:
                self._table = all_pairs_er(self._hidden).values
        return self._table

    def _er(self, u: int, v: int) -> Resistance:
        x = self._ensure_table()[u][v]
        if x is None or (isinstance(x, float) and math.isinf(x)):
            return Resistance.infinite()
        return Resistance(x if self.exact else float(x))

    def _sp(self, u: int, v: int) -> float:
        if u not in self._hops:
            self._hops[u] = self._hidden.hop_distances(u)
        return self._hops[u][v]


class TableOracle(Oracle):
    """Graph-free oracle answering from a mapping ``{(u, v): Resistance}``.

    Pairs missing from the table raise ``KeyError`` when queried.
    """

    def __init__(self, n: int, er_table: Mapping, sp_table: Mapping | None = None, *, ball: bool = False, mode: str = FLOAT):
        super().__init__(n, ball=ball, sp=sp_table is not None, mode=mode)
        self._er_table = {_key(u, v): r for (u, v), r in er_table.items()}
        self._sp_table = {_key(u, v): d for (u, v), d in (sp_table or {}).items()}

    @classmethod
    def from_matrix(cls, matrix, **kw) -> "TableOracle":
        """Build from an ``ErMatrix``, a square array, or a nested list (``None``/``inf`` = infinite)."""
        values = getattr(matrix, "values", matrix)
        n = len(values)
        table = {}
        for u in range(n):
            for v in range(u + 1, n):
                x = values[u][v]
                if x is None or (not isinstance(x, Fraction) and math.isinf(float(x))):
                    table[(u, v)] = Resistance.infinite()
                else:
                    table[(u, v)] = Resistance(x if isinstance(x, Fraction) else float(x))
        return cls(n, table, **kw)

    @classmethod
    def from_transcript(cls, text: str, n: int, **kw) -> "TableOracle":
        er, sp = {}, {}
        for line in text.splitlines():
            parts = line.split()
            if not parts or parts[0] != "q":
                continue
            kind, u, v, ans = parts[1], int(parts[2]) - 1, int(parts[3]) - 1, parts[4]
            if kind == "er":
                er[(u, v)] = parse_answer(ans)
            else:
                sp[(u, v)] = math.inf if ans == "inf" else int(ans)
        return cls(n, er, sp or None, **kw)

    def _er(self, u: int, v: int) -> Resistance:
        return self._er_table[(u, v)]

    def _sp(self, u: int, v: int) -> float:
        return self._sp_table[(u, v)]


def er_query(o: Oracle, u: int, v: int) -> Resistance:
    return o.er(u, v)


def sp_query(o: Oracle, u: int, v: int) -> float:
    return o.sp(u, v)


def sorted_ball_query(o: Oracle, v: int, k: int) -> list[tuple[int, Resistance]]:
    return o.sorted_ball(v, k)


def replay_transcript(text: str, o: Oracle) -> bool:
    """Re-ask every query of a dumped transcript and compare the rendered answers."""
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] != "q":
            continue
        kind, u, v, ans = parts[1], int(parts[2]) - 1, int(parts[3]) - 1, parts[4]
        got = o.er(u, v) if kind == "er" else o.sp(u, v)
        if format_answer(got) != ans:
            return False
    return True
