"""Effective-resistance query oracle lab.

Simulated ER oracles over hidden graphs, with exact-budget verification
procedures, randomized property testers, reconstruction algorithms and
executable separation witnesses.
"""

from .graph import Resistance, WeightedGraph
from .oracle import EXACT, FLOAT, ErOracle, QueryLedger, TableOracle

__all__ = ["EXACT", "FLOAT", "ErOracle", "QueryLedger", "Resistance", "TableOracle", "WeightedGraph"]
__version__ = "0.1.0"
