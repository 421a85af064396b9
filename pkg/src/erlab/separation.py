"""Executable witnesses that ER and shortest-path queries are incomparable.

* :func:`clique_check` decides ``hidden == K_n`` with ``n - 1`` ER queries,
  something shortest-path queries cannot do without inspecting most pairs.
* :func:`adjacency_family_report` exhibits two graphs whose ER values agree
  on every pair avoiding two special vertices, although one shortest-path
  query on the centers tells them apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .electrical import all_pairs_er
from .errors import Disconnected
from .generators import clique, sp_er_pair
from .oracle import ErOracle, Oracle
from .verify import Verdict, equal_monotone

AGREE_TOL = 1e-9


def clique_check(o: Oracle, *, tol: float = 1e-8) -> Verdict:
    """True iff the hidden graph is complete, using exactly ``n - 1`` ER queries.

    Every unweighted graph on ``n`` vertices is a subgraph of ``K_n``, so the
    monotone equality test applies.
    """
    verdict = equal_monotone(o, clique(o.n), tol=tol)
    for u in range(1, o.n):
        if o.er(0, u).is_infinite:
            raise Disconnected(f"vertex {u} is unreachable from vertex 0")
    return verdict


@dataclass
class AdjacencyFamilyReport:
    n: int
    i: int
    j: int
    avoiding_pairs: int
    avoiding_max_diff: float
    avoiding_agree: bool
    r_g_v1v2: float
    r_h_v1v2: float
    sp_g_v1v2: float
    sp_h_v1v2: float
    distinguishing_pairs: list[tuple[int, int]]
    distinguishing_touch_special: bool
    matrices: dict | None = None

    @property
    def holds(self) -> bool:
        return (
            self.avoiding_agree
            and abs(self.r_g_v1v2 - 1) <= AGREE_TOL
            and abs(self.r_h_v1v2 - 1) <= AGREE_TOL
            and self.sp_g_v1v2 != self.sp_h_v1v2
            and self.distinguishing_touch_special
        )


def adjacency_family_report(n: int, i: int, j: int, *, show_matrices: bool = False) -> AdjacencyFamilyReport:
    """Compare G and H_{i,j} (1-indexed ``i``, ``j``) on every vertex pair.

    Pairs are reported 1-indexed. The shortest-path check issues one query
    per graph on (v_1, v_2).
    """
    gen = sp_er_pair(n, i, j)
    g, h = gen.graph, gen.partner
    rg, rh = all_pairs_er(g).values, all_pairs_er(h).values
    special = {i - 1, j - 1}
    worst, count, distinguishing = 0.0, 0, []
    for x in range(n):
        for y in range(x + 1, n):
            diff = abs(rg[x, y] - rh[x, y])
            if x in special or y in special:
                if diff > AGREE_TOL:
                    distinguishing.append((x + 1, y + 1))
                continue
            count += 1
            worst = max(worst, float(diff))
            if diff > AGREE_TOL:
                distinguishing.append((x + 1, y + 1))
    sp_g = ErOracle(g).sp(0, 1)
    sp_h = ErOracle(h).sp(0, 1)
    matrices = None
    if show_matrices:
        matrices = {"G": np.round(rg, 12).tolist(), "H": np.round(rh, 12).tolist()}
    return AdjacencyFamilyReport(
        n=n,
        i=i,
        j=j,
        avoiding_pairs=count,
        avoiding_max_diff=worst,
        avoiding_agree=worst <= AGREE_TOL,
        r_g_v1v2=float(rg[0, 1]),
        r_h_v1v2=float(rh[0, 1]),
        sp_g_v1v2=sp_g,
        sp_h_v1v2=sp_h,
        distinguishing_pairs=distinguishing,
        distinguishing_touch_special=all(x in (i, j) or y in (i, j) for x, y in distinguishing),
        matrices=matrices,
    )
