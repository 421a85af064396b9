"""Text formats for graphs, tree decompositions and completion instances.

All formats are line based, 1-indexed, and allow ``#`` comments and blank lines.

Graph::

    p er <n> <m>
    e <u> <v> [<w>]          # weight defaults to 1

Tree decomposition (PACE style)::

    s td <#bags> <width+1> <n>
    b <id> <v> <v> ...
    <id> <id>                # one line per tree edge

Completion instance: a graph file whose unknown pairs read ``e <u> <v> ?``,
plus a header line ``w set <w1> <w2> ...``.
"""

from __future__ import annotations

from pathlib import Path

from .decomposition import TreeDecomposition
from .errors import BadParams, GraphFormatError, InvalidDecomposition
from .graph import WeightedGraph
from .reconstruct import CompletionInstance


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _int(tok: str, no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"line {no}: {what} must be an integer, got {tok!r}") from None


def _float(tok: str, no: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise GraphFormatError(f"line {no}: weight must be a number, got {tok!r}") from None


def _vertex(tok: str, no: int, n: int) -> int:
    v = _int(tok, no, "vertex")
    if not 1 <= v <= n:
        raise GraphFormatError(f"line {no}: vertex {v} outside 1..{n}")
    return v - 1


def _format_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def _parse_graph_lines(text: str, allow_unknown: bool):
    n = m = None
    edges, unknown, weight_set = [], [], None
    for no, tok in _lines(text):
        kind = tok[0]
        if kind == "p":
            if n is not None:
                raise GraphFormatError(f"line {no}: duplicate header")
            if len(tok) != 4 or tok[1] != "er":
                raise GraphFormatError(f"line {no}: header must read 'p er <n> <m>'")
            n, m = _int(tok[2], no, "n"), _int(tok[3], no, "m")
            if n < 1 or m < 0:
                raise GraphFormatError(f"line {no}: need n >= 1 and m >= 0")
        elif kind == "e":
            if n is None:
                raise GraphFormatError(f"line {no}: edge before header")
            if len(tok) not in (3, 4):
                raise GraphFormatError(f"line {no}: edge must read 'e <u> <v> [<w>]'")
            u, v = _vertex(tok[1], no, n), _vertex(tok[2], no, n)
            if u == v:
                raise GraphFormatError(f"line {no}: self-loop at vertex {u + 1}")
            if len(tok) == 4 and tok[3] == "?":
                if not allow_unknown:
                    raise GraphFormatError(f"line {no}: unknown weight '?' only allowed in completion instances")
                unknown.append((u, v))
                continue
            w = _float(tok[3], no) if len(tok) == 4 else 1.0
            if not w > 0 or w == float("inf"):
                raise GraphFormatError(f"line {no}: weight must be positive and finite")
            edges.append((u, v, w))
        elif kind == "w":
            if not allow_unknown:
                raise GraphFormatError(f"line {no}: weight-set line only allowed in completion instances")
            if len(tok) < 3 or tok[1] != "set":
                raise GraphFormatError(f"line {no}: weight set must read 'w set <w1> ...'")
            weight_set = [_float(t, no) for t in tok[2:]]
        else:
            raise GraphFormatError(f"line {no}: unknown line type {kind!r}")
    if n is None:
        raise GraphFormatError("missing 'p er <n> <m>' header")
    if len(edges) + len(unknown) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(edges) + len(unknown)}")
    seen = set()
    for u, v, *_ in edges + unknown:
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"pair ({u + 1}, {v + 1}) listed twice")
        seen.add(key)
    return n, edges, unknown, weight_set


def parse_graph(text: str) -> WeightedGraph:
    n, edges, _, _ = _parse_graph_lines(text, allow_unknown=False)
    return WeightedGraph(n, edges)


def format_graph(g: WeightedGraph) -> str:
    lines = [f"p er {g.n} {g.m}"]
    for u, v, w in g.edges:
        lines.append(f"e {u + 1} {v + 1}" if w == 1.0 else f"e {u + 1} {v + 1} {_format_weight(w)}")
    return "\n".join(lines) + "\n"


def parse_td(text: str, n: int | None = None) -> TreeDecomposition:
    header = None
    bags: dict[int, list[int]] = {}
    edges = []
    for no, tok in _lines(text):
        if tok[0] == "s":
            if header is not None:
                raise GraphFormatError(f"line {no}: duplicate header")
            if len(tok) != 5 or tok[1] != "td":
                raise GraphFormatError(f"line {no}: header must read 's td <#bags> <width+1> <n>'")
            header = [_int(t, no, "header field") for t in tok[2:]]
            if n is not None and header[2] != n:
                raise GraphFormatError(f"line {no}: decomposition is for n={header[2]}, graph has n={n}")
        elif header is None:
            raise GraphFormatError(f"line {no}: content before 's td' header")
        elif tok[0] == "b":
            if len(tok) < 2:
                raise GraphFormatError(f"line {no}: bag line needs an id")
            bid = _int(tok[1], no, "bag id")
            if not 1 <= bid <= header[0] or bid in bags:
                raise GraphFormatError(f"line {no}: bad or repeated bag id {bid}")
            bags[bid] = [_vertex(t, no, header[2]) for t in tok[2:]]
        else:
            if len(tok) != 2:
                raise GraphFormatError(f"line {no}: tree edge must read '<id> <id>'")
            a, b = (_int(t, no, "bag id") for t in tok)
            if not (1 <= a <= header[0] and 1 <= b <= header[0]):
                raise GraphFormatError(f"line {no}: tree edge refers to a missing bag")
            edges.append((a - 1, b - 1))
    if header is None:
        raise GraphFormatError("missing 's td' header")
    if len(bags) != header[0]:
        raise GraphFormatError(f"header announces {header[0]} bags, found {len(bags)}")
    width_plus_one = max((len(b) for b in bags.values()), default=0)
    if width_plus_one != header[1]:
        raise GraphFormatError(f"header announces bag size {header[1]}, largest bag has {width_plus_one}")
    try:
        return TreeDecomposition([bags[i] for i in range(1, header[0] + 1)], edges)
    except InvalidDecomposition as exc:
        raise GraphFormatError(str(exc)) from None


def format_td(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, bag in enumerate(td.bags, 1):
        lines.append(" ".join(["b", str(i)] + [str(v + 1) for v in sorted(bag)]))
    lines += [f"{a + 1} {b + 1}" for a, b in td.tree_edges]
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> CompletionInstance:
    n, edges, unknown, weight_set = _parse_graph_lines(text, allow_unknown=True)
    if weight_set is None:
        raise GraphFormatError("completion instance needs a 'w set ...' line")
    try:
        return CompletionInstance(WeightedGraph(n, edges), unknown, weight_set)
    except BadParams as exc:
        raise GraphFormatError(str(exc)) from None


def format_instance(inst: CompletionInstance) -> str:
    lines = [f"p er {inst.n} {inst.known.m + inst.k}", "w set " + " ".join(_format_weight(w) for w in inst.weight_set)]
    for u, v, w in inst.known.edges:
        lines.append(f"e {u + 1} {v + 1}" if w == 1.0 else f"e {u + 1} {v + 1} {_format_weight(w)}")
    lines += [f"e {u + 1} {v + 1} ?" for u, v in inst.unknown]
    return "\n".join(lines) + "\n"


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc.strerror}") from None


def read_graph(path) -> WeightedGraph:
    return parse_graph(_read(path))


def read_td(path, n: int | None = None) -> TreeDecomposition:
    return parse_td(_read(path), n)


def read_instance(path) -> CompletionInstance:
    return parse_instance(_read(path))


def write_text(path, text: str):
    Path(path).write_text(text)
