"""Single-line JSON run reports with a fixed key order."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Resistance

REPORT_KEYS = (
    "command",
    "n",
    "verdict",
    "reason",
    "distinct_queries",
    "total_queries",
    "seed",
    "tolerance",
    "elapsed_ms",
    "details",
)


@dataclass
class RunRecord:
    command: str
    n: int | None = None
    verdict: object = None
    reason: str | None = None
    distinct_queries: int = 0
    total_queries: int = 0
    seed: int = 0
    tolerance: float = 1e-8
    elapsed_ms: float = 0.0
    details: dict = field(default_factory=dict)


def _plain(x):
    """Convert report values to JSON-ready data; floats keep 12 significant digits."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, enum.Enum):
        return _plain(x.value)
    if isinstance(x, int):
        return x
    if isinstance(x, Resistance):
        return "inf" if x.is_infinite else _plain(x.value)
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, float) or hasattr(x, "dtype"):
        if hasattr(x, "dtype") and getattr(x, "ndim", 0) == 0 and x.dtype.kind in "iub":
            return x.item()
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, str) else k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "tolist"):
        return _plain(x.tolist())
    return str(x)


def emit_report(record: RunRecord) -> str:
    data = {key: _plain(getattr(record, key)) for key in REPORT_KEYS}
    return json.dumps(data, separators=(",", ":"))
