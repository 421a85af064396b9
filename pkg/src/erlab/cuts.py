"""Classical (adjacency-based) cut structure, used as a reference for the ER procedures."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .graph import WeightedGraph


@dataclass(frozen=True)
class CutAnalysis:
    articulation_points: frozenset[int]
    bridges: frozenset[tuple[int, int]]
    biconnected_components: tuple[frozenset[int], ...]
    edge_biconnected_components: tuple[frozenset[int], ...]

    def same_biconnected_component(self, a: int, b: int) -> bool:
        return any(a in c and b in c for c in self.biconnected_components)

    def edge_component_of(self, v: int) -> int:
        return next(i for i, c in enumerate(self.edge_biconnected_components) if v in c)


def to_networkx(g: WeightedGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_weighted_edges_from(g.edges)
    return h


def classical_cut_analysis(g: WeightedGraph) -> CutAnalysis:
    """Articulation points, bridges, and both kinds of biconnected components via DFS low-link."""
    h = to_networkx(g)
    bridges = frozenset(tuple(sorted(e)) for e in nx.bridges(h))
    bicomps = tuple(sorted((frozenset(c) for c in nx.biconnected_components(h)), key=sorted))
    no_bridges = h.copy()
    no_bridges.remove_edges_from(bridges)
    ecomps = tuple(sorted((frozenset(c) for c in nx.connected_components(no_bridges)), key=sorted))
    return CutAnalysis(frozenset(nx.articulation_points(h)), bridges, bicomps, ecomps)
