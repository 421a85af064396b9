"""Command-line harness: ``erlab <command> [flags]``.

Every command prints one JSON report line (or writes it to ``--out``).
Exit status: 0 for a positive verdict or success, 1 for a negative verdict,
2 for usage and input errors. Vertex ids on the command line and in
reports are 1-indexed, matching the file formats.

The hidden graph file is only ever handed to the oracle constructor;
algorithms see the oracle. Harness-side comparisons against the hidden
graph (reconstruction error, classical cross-checks) happen after the
algorithm has returned and never feed back into it.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import generators, io
from .electrical import laplacian
from .errors import AmbiguousCompletion, ErLabError, NoConsistentCompletion
from .oracle import EXACT, FLOAT, ErOracle
from .property_testing import (
    TriangleFreenessTester,
    adapt_bounded_degree_tester,
    edge_tester_scale,
    er_density,
    run_bounded_degree_tester,
    test_edge_biconnectivity,
    test_vertex_biconnectivity,
    vertex_tester_budget,
)
from .reconstruct import (
    complete_exhaustive,
    complete_quadratic,
    edge_laplacian,
    logdet,
    logdet_directional_derivative,
    reconstruct_from_td,
    reconstruct_full,
    reconstruct_schur,
)
from .report import RunRecord, emit_report
from .separation import adjacency_family_report, clique_check
from .verify import equal_monotone, is_cut_edge, is_cut_vertex, is_tree, same_biconnected_component

WEIGHT_TOL = 1e-6

# Oracle capability each command needs: "er" plain queries, "ball" optionally
# sorted-ball queries, "none" no oracle at all (offline computations).
CAPABILITIES = {
    "gen": "none",
    "er": "er",
    "reconstruct-full": "er",
    "reconstruct-td": "er",
    "reconstruct-schur": "er",
    "complete": "er",
    "verify-tree": "er",
    "verify-equal": "er",
    "verify-cut-vertex": "er",
    "verify-cut-edge": "er",
    "verify-bicomp": "er",
    "ptest-vbc": "er",
    "ptest-ebc": "ball",
    "density": "none",
    "adapt-test": "ball",
    "sep-clique": "er",
    "sep-adjacency": "none",
    "gradient-check": "er",
}


class UsageError(Exception):
    pass


def _pair_name(u: int, v: int) -> str:
    return f"{u + 1}-{v + 1}"


def _vertex_arg(args, name: str, n: int) -> int:
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"--{name} is required")
    if not 1 <= v <= n:
        raise UsageError(f"--{name} {v} is outside 1..{n}")
    return v - 1


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        if key == "weights":
            lo, hi = (float(x) for x in value.split(","))
            out[key] = (lo, hi)
        else:
            out[key] = value
    return out


def _oracle(args, hidden):
    return ErOracle(hidden, mode=EXACT if args.exact else FLOAT, ball=args.ball_oracle, sp=False)


def _ledger(rec: RunRecord, q):
    rec.distinct_queries, rec.total_queries = q.distinct, q.total


# --- command bodies: each fills ``rec`` ---


def cmd_gen(args, rec):
    if not args.graph_out:
        raise UsageError("gen needs --graph-out")
    gen = generators.generate(args.family, _params(args.param), args.seed)
    io.write_text(args.graph_out, io.format_graph(gen.graph))
    rec.n = gen.graph.n
    rec.verdict = True
    rec.details = {"family": args.family, "m": gen.graph.m, "graph_file": args.graph_out}
    if args.td_out:
        if gen.td is None:
            raise UsageError(f"family {args.family!r} does not come with a tree decomposition")
        io.write_text(args.td_out, io.format_td(gen.td, gen.graph.n))
        rec.details["td_file"] = args.td_out
        rec.details["td_width"] = gen.td.width
    if args.partner_out:
        if gen.partner is None:
            raise UsageError(f"family {args.family!r} has no partner graph")
        io.write_text(args.partner_out, io.format_graph(gen.partner))
        rec.details["partner_file"] = args.partner_out


def cmd_er(args, rec, hidden):
    o = _oracle(args, hidden)
    u, v = _vertex_arg(args, "u", o.n), _vertex_arg(args, "v", o.n)
    r = o.er(u, v)
    _ledger(rec, o.ledger)
    rec.verdict = True
    rec.details = {"u": u + 1, "v": v + 1, "resistance": r}


def _reconstruction_details(result, hidden, rec, args):
    err = result.graph.max_weight_error(hidden)
    _ledger(rec, result.queries)
    rec.verdict = err < args.weight_tol
    rec.reason = None if rec.verdict else "WeightMismatch"
    rec.details = {"m": result.graph.m, "max_weight_error": err, **result.details}
    if args.graph_out:
        io.write_text(args.graph_out, io.format_graph(result.graph))
        rec.details["graph_file"] = args.graph_out


def cmd_reconstruct_full(args, rec, hidden):
    result = reconstruct_full(_oracle(args, hidden))
    _reconstruction_details(result, hidden, rec, args)
    rec.details["budget"] = math.comb(hidden.n, 2)


def cmd_reconstruct_td(args, rec, hidden):
    if not args.td:
        raise UsageError("reconstruct-td needs --td")
    td = io.read_td(args.td, hidden.n)
    result = reconstruct_from_td(_oracle(args, hidden), td)
    _reconstruction_details(result, hidden, rec, args)
    rec.details["budget"] = len(td.bags) * math.comb(td.width + 1, 2)


def cmd_reconstruct_schur(args, rec, hidden):
    if not args.keep:
        raise UsageError("reconstruct-schur needs --keep")
    keep = [int(x) for x in args.keep.split(",")]
    if any(not 1 <= x <= hidden.n for x in keep):
        raise UsageError(f"--keep vertices must lie in 1..{hidden.n}")
    o = _oracle(args, hidden)
    red = reconstruct_schur(o, [x - 1 for x in keep])
    _ledger(rec, o.ledger)
    rec.verdict = True
    rec.details = {
        "keep": [x + 1 for x in red.ids],
        "edges": [[red.ids[a] + 1, red.ids[b] + 1, w] for a, b, w in red.graph.edges],
        "budget": math.comb(len(red.ids), 2),
    }


def cmd_complete(args, rec, hidden):
    if not args.instance:
        raise UsageError("complete needs --instance")
    inst = io.read_instance(args.instance)
    if inst.n != hidden.n:
        raise UsageError(f"instance has n={inst.n}, hidden graph has n={hidden.n}")
    o = _oracle(args, hidden)
    rec.details = {"mode": args.mode, "k": inst.k}
    try:
        if args.mode == "exhaustive":
            result = complete_exhaustive(o, inst)
        else:
            result = complete_quadratic(o, inst)
    except (NoConsistentCompletion, AmbiguousCompletion) as exc:
        _ledger(rec, o.ledger)
        rec.verdict = False
        rec.reason = type(exc).__name__
        rec.details["message"] = str(exc)
        return
    weights = result.details.pop("weights")
    _reconstruction_details(result, hidden, rec, args)
    rec.details.update({"mode": args.mode, "k": inst.k})
    rec.details["weights"] = {_pair_name(u, v): w for (u, v), w in weights.items()}


def _verdict(rec, verdict, witness_fmt=lambda w: w + 1):
    _ledger(rec, verdict.queries)
    rec.verdict = verdict.answer
    rec.reason = verdict.reason
    if verdict.witness is not None:
        rec.details["witness"] = witness_fmt(verdict.witness)
    if verdict.notes:
        rec.details["notes"] = list(verdict.notes)


def cmd_verify_tree(args, rec, hidden):
    _verdict(rec, is_tree(_oracle(args, hidden), weighted=args.weighted, tol=args.tol))


def cmd_verify_equal(args, rec, hidden):
    if not args.known:
        raise UsageError("verify-equal needs --known")
    known = io.read_graph(args.known)
    if known.n != hidden.n:
        raise UsageError(f"known graph has n={known.n}, hidden graph has n={hidden.n}")
    _verdict(rec, equal_monotone(_oracle(args, hidden), known, tol=args.tol))


def cmd_verify_cut_vertex(args, rec, hidden):
    o = _oracle(args, hidden)
    v = _vertex_arg(args, "vertex", o.n)
    rec.details = {"vertex": v + 1}
    _verdict(rec, is_cut_vertex(o, v, weighted=args.weighted, tol=args.tol))


def cmd_verify_cut_edge(args, rec, hidden):
    o = _oracle(args, hidden)
    u, v = _vertex_arg(args, "u", o.n), _vertex_arg(args, "v", o.n)
    rec.details = {"edge": [u + 1, v + 1]}
    _verdict(rec, is_cut_edge(o, u, v, weighted=args.weighted, tol=args.tol))


def cmd_verify_bicomp(args, rec, hidden):
    o = _oracle(args, hidden)
    u, v = _vertex_arg(args, "u", o.n), _vertex_arg(args, "v", o.n)
    rec.details = {"pair": [u + 1, v + 1]}
    _verdict(rec, same_biconnected_component(o, u, v, weighted=args.weighted, tol=args.tol))


def _outcome(rec, out, eps):
    _ledger(rec, out.queries)
    rec.verdict = out.decision.value
    rec.reason = out.reason.value
    rec.details = {"eps": eps, "samples_used": out.samples_used}
    if out.witness is not None:
        rec.details["witness"] = [x + 1 for x in out.witness]
    rec.details.update(out.details)


def _eps(args) -> float:
    if args.eps is None:
        raise UsageError("--eps is required")
    return args.eps


def cmd_ptest_vbc(args, rec, hidden):
    eps = _eps(args)
    out = test_vertex_biconnectivity(_oracle(args, hidden), eps, args.seed)
    _outcome(rec, out, eps)
    rec.details["budget"] = vertex_tester_budget(hidden.n, eps)


def cmd_ptest_ebc(args, rec, hidden):
    eps = _eps(args)
    out = test_edge_biconnectivity(_oracle(args, hidden), eps, args.seed)
    _outcome(rec, out, eps)
    rec.details["budget_scale"] = edge_tester_scale(hidden.n, eps)


def cmd_density(args, rec, hidden):
    d = er_density(hidden)
    rec.verdict = True
    rec.details = {"rho": d.rho, "argmax": d.argmax + 1}


def cmd_adapt_test(args, rec, hidden):
    eps = _eps(args)
    tester = TriangleFreenessTester(args.degree_bound, eps)
    out = adapt_bounded_degree_tester(_oracle(args, hidden), tester, args.seed)
    direct = run_bounded_degree_tester(hidden, tester, args.seed)
    _outcome(rec, out, eps)
    rec.reason = out.reason.value
    rec.details["degree_bound"] = args.degree_bound
    rec.details["direct_decision"] = direct.decision.value


def cmd_sep_clique(args, rec, hidden):
    _verdict(rec, clique_check(_oracle(args, hidden), tol=args.tol))


def cmd_sep_adjacency(args, rec):
    for name in ("n", "i", "j"):
        if getattr(args, name) is None:
            raise UsageError(f"sep-adjacency needs --{name}")
    r = adjacency_family_report(args.n, args.i, args.j, show_matrices=args.show_matrices)
    rec.n = r.n
    rec.verdict = r.holds
    rec.reason = None if r.holds else "SeparationFailed"
    rec.distinct_queries = 0
    rec.details = {
        "i": r.i,
        "j": r.j,
        "avoiding_pairs": r.avoiding_pairs,
        "avoiding_max_diff": r.avoiding_max_diff,
        "r_g_v1v2": r.r_g_v1v2,
        "r_h_v1v2": r.r_h_v1v2,
        "sp_g_v1v2": r.sp_g_v1v2,
        "sp_h_v1v2": r.sp_h_v1v2,
        "distinguishing_pairs": len(r.distinguishing_pairs),
    }
    if r.matrices is not None:
        rec.details["matrices"] = r.matrices


def cmd_gradient_check(args, rec, hidden):
    o = _oracle(args, hidden)
    u, v = _vertex_arg(args, "u", o.n), _vertex_arg(args, "v", o.n)
    queried = float(o.er(u, v))
    analytic = logdet_directional_derivative(hidden, u, v)
    n = hidden.n
    l_reg = laplacian(hidden) + 1.0 / n
    m = edge_laplacian(n, u, v)
    h = args.h
    fd = (logdet(l_reg + h * m) - logdet(l_reg - h * m)) / (2 * h)
    _ledger(rec, o.ledger)
    ok = abs(analytic - queried) < 1e-7 and abs(fd - analytic) < 1e-5
    rec.verdict = ok
    rec.reason = None if ok else "GradientMismatch"
    rec.details = {"u": u + 1, "v": v + 1, "analytic": analytic, "queried": queried, "finite_difference": fd, "h": h}


COMMANDS = {
    "gen": (cmd_gen, "write a generated graph (and optionally its decomposition) to files"),
    "er": (cmd_er, "answer one ER query --u/--v on the hidden graph"),
    "reconstruct-full": (cmd_reconstruct_full, "recover the hidden graph from all pairwise resistances"),
    "reconstruct-td": (cmd_reconstruct_td, "recover the hidden graph guided by the tree decomposition --td"),
    "reconstruct-schur": (cmd_reconstruct_schur, "Schur complement onto --keep from its pairwise resistances"),
    "complete": (cmd_complete, "fill the unknown entries of --instance"),
    "verify-tree": (cmd_verify_tree, "is the (unweighted) hidden graph a tree? n-1 queries"),
    "verify-equal": (cmd_verify_equal, "is the hidden graph equal to --known (weights ordered one way)? n-1 queries"),
    "verify-cut-vertex": (cmd_verify_cut_vertex, "is --vertex a cut vertex? 2n-3 queries"),
    "verify-cut-edge": (cmd_verify_cut_edge, "is --u --v a cut edge (unweighted)? 2n-3 queries"),
    "verify-bicomp": (cmd_verify_bicomp, "are --u and --v in one biconnected component? 2n-3 queries"),
    "ptest-vbc": (cmd_ptest_vbc, "randomized vertex-biconnectivity tester"),
    "ptest-ebc": (cmd_ptest_ebc, "randomized edge-biconnectivity tester"),
    "density": (cmd_density, "largest ER unit ball of the graph (offline)"),
    "adapt-test": (cmd_adapt_test, "triangle-freeness tester run through ER neighborhood discovery"),
    "sep-clique": (cmd_sep_clique, "is the hidden graph complete? n-1 ER queries"),
    "sep-adjacency": (cmd_sep_adjacency, "compare the double star G with its square variant H_ij"),
    "gradient-check": (cmd_gradient_check, "log-det directional derivative versus the queried ER of --u --v"),
}

_CAPABILITY_HELP = {
    "none": "oracle: none (offline)",
    "er": "oracle: plain ER queries",
    "ball": "oracle: ER queries; --ball-oracle adds sorted-ball queries",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="erlab", description="Effective-resistance query oracle lab.")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)
    for name, (_, summary) in COMMANDS.items():
        cap = CAPABILITIES[name]
        p = sub.add_parser(name, help=summary, description=f"{summary}. [{_CAPABILITY_HELP[cap]}]")
        p.add_argument("--hidden", help="hidden graph file (read only by the oracle)")
        p.add_argument("--known", help="known graph file (verify-equal)")
        p.add_argument("--td", help="tree decomposition file (PACE style)")
        p.add_argument("--instance", help="completion instance file")
        p.add_argument("--eps", type=float, help="tester proximity parameter in (0, 1]")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-8, help="comparison tolerance (default 1e-8)")
        p.add_argument("--exact", action="store_true", help="rational oracle answers")
        p.add_argument("--ball-oracle", action="store_true", help="enable sorted-ball queries")
        p.add_argument("--out", help="write the report here instead of standard output")
        p.add_argument("--weighted", action="store_true", help="declare the hidden graph weighted")
        p.add_argument("--vertex", type=int)
        p.add_argument("--u", type=int)
        p.add_argument("--v", type=int)
        p.add_argument("--keep", help="comma-separated vertex list")
        p.add_argument("--mode", choices=("exhaustive", "quadratic"), default="exhaustive")
        p.add_argument("--weight-tol", type=float, default=WEIGHT_TOL)
        p.add_argument("--graph-out")
        p.add_argument("--td-out")
        p.add_argument("--partner-out")
        p.add_argument("--family")
        p.add_argument("--param", action="append", help="family parameter key=value (repeatable)")
        p.add_argument("--degree-bound", type=int, default=3)
        p.add_argument("--h", type=float, default=1e-5, help="finite-difference step")
        p.add_argument("--n", type=int)
        p.add_argument("--i", type=int)
        p.add_argument("--j", type=int)
        p.add_argument("--show-matrices", action="store_true")
    return parser


def run(argv=None) -> tuple[int, str | None]:
    """Execute one command; return ``(exit status, report line or None)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    start = time.perf_counter()
    rec = RunRecord(command=args.command, seed=args.seed, tolerance=args.tol)
    func = COMMANDS[args.command][0]
    try:
        if args.ball_oracle and CAPABILITIES[args.command] != "ball":
            raise UsageError(f"{args.command} does not use sorted-ball queries; drop --ball-oracle")
        if args.eps is not None and not 0 < args.eps <= 1:
            raise UsageError("--eps must lie in (0, 1]")
        if args.command in ("gen", "sep-adjacency"):
            func(args, rec)
        else:
            if not args.hidden:
                raise UsageError(f"{args.command} needs --hidden")
            hidden = io.read_graph(args.hidden)
            rec.n = hidden.n
            func(args, rec, hidden)
    except (UsageError, ErLabError, ValueError) as exc:
        print(f"erlab {args.command}: error: {exc}", file=sys.stderr)
        return 2, None
    rec.elapsed_ms = (time.perf_counter() - start) * 1000.0
    line = emit_report(rec)
    if args.out:
        io.write_text(args.out, line + "\n")
    else:
        print(line)
    return (0 if rec.verdict in (True, "Accept") else 1), line


def main(argv=None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
