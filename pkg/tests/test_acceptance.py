"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (also repeated in the pytest
terminal summary) and then asserts. Derived values come from independent
references: networkx for classical cut analysis and resistances, sympy
matrix-tree determinants for exact values, brute-force pseudoinverses, and
finite differences.
"""

import itertools
import math

import networkx as nx
import numpy as np

from erlab import generators as gen
from erlab import property_testing as pt
from erlab.cuts import classical_cut_analysis
from erlab.decomposition import TreeDecomposition
from erlab.electrical import all_pairs_er, effective_resistance, electrical_flow, flow_energy, laplacian
from erlab.graph import WeightedGraph
from erlab.oracle import ErOracle
from erlab.reconstruct import (
    CompletionInstance,
    complete_exhaustive,
    edge_laplacian,
    logdet,
    logdet_directional_derivative,
    reconstruct_from_td,
    reconstruct_full,
    reconstruct_schur,
    uniqueness_brute_force,
)
from erlab.separation import adjacency_family_report
from erlab.verify import equal_monotone, is_cut_edge, is_cut_vertex, is_tree, same_biconnected_component

from helpers import brute_pinv, cycle_basis_vectors, matrix_tree_er, net_outflow, networkx_er, to_nx, tree_path_flow

RESULTS: list[str] = []


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} -- {detail}"
    RESULTS.append(line)
    print(line)


def connected_corpus(count, n_range, seed, weights=None, p=0.3):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        out.append(gen.random_connected(n, float(rng.uniform(0.05, p)), seed=int(rng.integers(2**31)), weights=weights))
    return out


# ---------- 1. exact query budgets ----------


def test_criterion_1_exact_query_budgets():
    rng = np.random.default_rng(101)
    failures = []
    runs = 0

    def expect(name, got, want):
        nonlocal runs
        runs += 1
        if got != want:
            failures.append(f"{name}: {got} != {want}")

    for g in connected_corpus(40, (2, 20), seed=1):
        n = g.n
        pairs = list(itertools.combinations(range(n), 2))
        expect("verify-tree", is_tree(ErOracle(g)).queries.distinct, n - 1)
        tree = gen.random_tree(n, seed=int(rng.integers(2**31)))
        expect("verify-tree(tree)", is_tree(ErOracle(tree)).queries.distinct, n - 1)
        sub = WeightedGraph(n, g.edges[: max(n - 1, int(rng.integers(0, g.m + 1)))])
        expect("verify-equal", equal_monotone(ErOracle(g), sub).queries.distinct, n - 1)
        if n >= 2:
            v = int(rng.integers(n))
            # the cut-vertex test needs three distinct vertices; on n = 2 it answers without queries
            expect("verify-cut-vertex", is_cut_vertex(ErOracle(g), v).queries.distinct, 2 * n - 3 if n >= 3 else 0)
            a, b = pairs[int(rng.integers(len(pairs)))]
            expect("verify-bicomp", same_biconnected_component(ErOracle(g), a, b).queries.distinct, 2 * n - 3)
            a, b, _ = g.edges[int(rng.integers(g.m))]
            expect("verify-cut-edge", is_cut_edge(ErOracle(g), a, b).queries.distinct, 2 * n - 3)
        expect("reconstruct-full", reconstruct_full(ErOracle(g)).queries.distinct, math.comb(n, 2))
        if n >= 2:
            size = int(rng.integers(2, n + 1))
            keep = sorted(int(x) for x in rng.choice(n, size=size, replace=False))
            o = ErOracle(g)
            reconstruct_schur(o, keep)
            expect("reconstruct-schur", o.ledger.distinct, math.comb(size, 2))

    for inst_seed in range(30):
        n = int(rng.integers(4, 11))
        g = gen.random_connected(n, 0.3, seed=inst_seed)
        pairs = list(itertools.combinations(range(n), 2))
        k = int(rng.integers(1, 6))
        unknown = [pairs[int(i)] for i in rng.choice(len(pairs), size=k, replace=False)]
        inst = CompletionInstance.from_hidden(g, unknown)
        expect("complete", complete_exhaustive(ErOracle(g), inst).queries.distinct, k)

    ok = not failures
    report(1, "exact query budgets", ok, f"{runs} runs, {len(failures)} mismatches {failures[:3]}")
    assert ok, failures


# ---------- 2. agreement with classical cut analysis ----------


def test_criterion_2_oracle_equivalence_with_classical_analysis():
    rng = np.random.default_rng(202)
    checks = disagreements = 0
    for _ in range(200):
        n = int(rng.integers(2, 15))
        g = gen.random_connected(n, float(rng.uniform(0.0, 0.35)), seed=int(rng.integers(2**31)))
        h = to_nx(g)
        arts = set(nx.articulation_points(h))
        bridges = {tuple(sorted(e)) for e in nx.bridges(h)}
        comp_of = {}
        for i, comp in enumerate(nx.biconnected_components(h)):
            for x in comp:
                comp_of.setdefault(x, set()).add(i)
        o = ErOracle(g)
        for v in range(n):
            checks += 1
            disagreements += bool(is_cut_vertex(o, v)) != (v in arts)
        for a, b, _ in g.edges:
            checks += 1
            disagreements += bool(is_cut_edge(o, a, b)) != ((a, b) in bridges)
        for a, b in itertools.combinations(range(n), 2):
            checks += 1
            disagreements += bool(same_biconnected_component(o, a, b)) != bool(comp_of[a] & comp_of[b])
    ok = disagreements == 0
    report(2, "cut verdicts vs classical DFS analysis", ok, f"{checks} verdicts on 200 graphs, {disagreements} disagreements")
    assert ok


# ---------- 3. reconstruction round trips ----------


def test_criterion_3_reconstruction_round_trip():
    worst_full = 0.0
    for g in connected_corpus(100, (2, 20), seed=3, weights=(0.5, 2.0)):
        res = reconstruct_full(ErOracle(g)).compare(g)
        worst_full = max(worst_full, res.max_weight_error)
    td_fail = []
    worst_td = 0.0
    rng = np.random.default_rng(33)
    cases = 0
    for _ in range(40):
        n = int(rng.integers(5, 16))
        k = int(rng.integers(1, 4))
        made = gen.random_partial_ktree(n, k, seed=int(rng.integers(2**31)), weights=(0.5, 2.0))
        cases += 1
        assert made.td.width <= 3
        res = reconstruct_from_td(ErOracle(made.graph), made.td).compare(made.graph)
        worst_td = max(worst_td, res.max_weight_error)
        budget = len(made.td.bags) * math.comb(made.td.width + 1, 2)
        if res.queries.distinct > budget:
            td_fail.append(("budget", n, res.queries.distinct, budget))
        if n >= 10 and res.queries.distinct >= math.comb(n, 2):
            td_fail.append(("not below C(n,2)", n, res.queries.distinct))
    ok = worst_full < 1e-6 and worst_td < 1e-6 and not td_fail
    report(
        3,
        "reconstruction round trip",
        ok,
        f"full: 100 graphs, max err {worst_full:.2e}; td: {cases} graphs width<=3, max err {worst_td:.2e}, "
        f"budget violations {td_fail}",
    )
    assert ok


# ---------- 4. completion ----------


def test_criterion_4_completion_and_uniqueness():
    rng = np.random.default_rng(404)
    failures = []
    for idx in range(50):
        n = int(rng.integers(4, 11))
        weight_set = (0.0, 1.0) if idx % 2 == 0 else (0.0, 1.0, 2.0)
        g = gen.random_connected(n, 0.3, seed=int(rng.integers(2**31)))
        if len(weight_set) == 3:
            g = WeightedGraph(n, [(u, v, float(rng.choice([1.0, 2.0]))) for u, v, _ in g.edges])
        pairs = list(itertools.combinations(range(n), 2))
        k = int(rng.integers(1, min(6, len(pairs)) + 1))
        unknown = [pairs[int(i)] for i in rng.choice(len(pairs), size=k, replace=False)]
        inst = CompletionInstance.from_hidden(g, unknown, weight_set)
        try:
            res = complete_exhaustive(ErOracle(g), inst)
        except Exception as exc:  # any failure is a criterion failure
            failures.append((idx, type(exc).__name__))
            continue
        if res.queries.distinct != k or res.graph != g:
            failures.append((idx, res.queries.distinct, k))

    # Every instance on 3 and 4 vertices: each pair is a known edge, a known non-edge, or unknown.
    instances, worst = 0, 0
    for n in (3, 4):
        pairs = list(itertools.combinations(range(n), 2))
        for labels in itertools.product("eau", repeat=len(pairs)):
            known = WeightedGraph(n, [p for p, c in zip(pairs, labels) if c == "e"])
            unknown = [p for p, c in zip(pairs, labels) if c == "u"]
            res = uniqueness_brute_force(n, known, unknown)
            if res.connected_completions:
                instances += 1
                worst = max(worst, res.max_group)
    # On 5 vertices: 300 random labelled instances plus every unknown set of size 4 over a path.
    pairs5 = list(itertools.combinations(range(5), 2))
    for _ in range(300):
        labels = rng.choice(3, size=len(pairs5))
        known = WeightedGraph(5, [p for p, c in zip(pairs5, labels) if c == 0])
        unknown = [p for p, c in zip(pairs5, labels) if c == 2]
        res = uniqueness_brute_force(5, known, unknown)
        if res.connected_completions:
            instances += 1
            worst = max(worst, res.max_group)
    path5 = gen.path(5)
    for unknown in itertools.combinations([p for p in pairs5 if not path5.has_edge(*p)], 4):
        instances += 1
        worst = max(worst, uniqueness_brute_force(5, path5, list(unknown)).max_group)

    ok = not failures and worst == 1
    report(4, "exhaustive completion and uniqueness", ok,
           f"50 completions, failures {failures}; {instances} uniqueness instances (n<=5), max group {worst}")
    assert ok


# ---------- 5. log-det gradient ----------


def test_criterion_5_logdet_gradient_equals_resistance():
    worst_er = worst_fd = 0.0
    rng = np.random.default_rng(505)
    h = 1e-5
    for g in connected_corpus(50, (2, 12), seed=5, weights=(0.5, 2.0)):
        L = laplacian(g) + 1 / g.n
        pairs = list(itertools.combinations(range(g.n), 2))
        for idx in rng.choice(len(pairs), size=min(3, len(pairs)), replace=False):
            i, j = pairs[int(idx)]
            d = logdet_directional_derivative(g, i, j)
            worst_er = max(worst_er, abs(d - ErOracle(g).er(i, j).value))
            m = edge_laplacian(g.n, i, j)
            fd = (logdet(L + h * m) - logdet(L - h * m)) / (2 * h)
            worst_fd = max(worst_fd, abs(fd - d))
    ok = worst_er < 1e-7 and worst_fd < 1e-5
    report(5, "log-det gradient identity", ok, f"50 graphs: max |grad - R| {worst_er:.2e}, max |grad - fd| {worst_fd:.2e}")
    assert ok


# ---------- 6. matrix identity ----------


def test_criterion_6_double_centering_recovers_pseudoinverse():
    worst = 0.0
    for g in connected_corpus(50, (2, 16), seed=6, weights=(0.5, 2.0)):
        n = g.n
        r = np.array([[networkx_er(g, u, v) if u != v else 0.0 for v in range(n)] for u in range(n)])
        P = np.eye(n) - np.ones((n, n)) / n
        worst = max(worst, float(np.abs(-0.5 * P @ r @ P - brute_pinv(laplacian(g))).max()))
    ok = worst < 1e-7
    report(6, "-1/2 (I-J/n) R (I-J/n) = L+", ok, f"50 graphs, max entry error {worst:.2e}")
    assert ok


# ---------- 7. property testers ----------


def test_criterion_7_property_testers():
    rng = np.random.default_rng(707)
    eps_choices = (0.25, 0.5, 1.0)
    false_rejects = 0
    vbc_budget_violations = 0
    constants = []
    graphs = [gen.random_biconnected(int(rng.integers(3, 17)), 0.2, seed=int(rng.integers(2**31))) for _ in range(50)]
    for g in graphs:
        eps = float(rng.choice(eps_choices))
        for seed in range(20):
            out = pt.test_vertex_biconnectivity(ErOracle(g), eps, seed)
            false_rejects += not out.accepted
            vbc_budget_violations += out.queries.distinct > pt.vertex_tester_budget(g.n, eps)
            out = pt.test_edge_biconnectivity(ErOracle(g, ball=bool(seed % 2)), eps, seed)
            false_rejects += not out.accepted
            constants.append(out.details["budget_constant"])

    rates = {}
    for name, g, tester in [
        ("star/vertex", gen.star(20), pt.test_vertex_biconnectivity),
        ("star/edge", gen.star(20), pt.test_edge_biconnectivity),
        ("triangle-chain/vertex", gen.triangle_chain(8), pt.test_vertex_biconnectivity),
        ("triangle-chain/edge", gen.triangle_chain(8), pt.test_edge_biconnectivity),
    ]:
        rejects = 0
        for seed in range(40):
            out = tester(ErOracle(g), 0.5, seed)
            rejects += not out.accepted
            if tester is pt.test_vertex_biconnectivity:
                vbc_budget_violations += out.queries.distinct > pt.vertex_tester_budget(g.n, 0.5)
            else:
                constants.append(out.details["budget_constant"])
        rates[name] = rejects / 40
    c = max(constants)
    ok = false_rejects == 0 and vbc_budget_violations == 0 and all(r >= 2 / 3 - 0.15 for r in rates.values())
    report(
        7,
        "biconnectivity testers",
        ok,
        f"false rejects {false_rejects} over 50 graphs x 20 seeds x 2 testers; rejection rates {rates}; "
        f"vertex budget violations {vbc_budget_violations}; edge tester constant c = {c:.4f} "
        f"(distinct <= c*(n/eps^2 + 1/eps^4))",
    )
    assert ok


# ---------- 8. separation witnesses ----------


def test_criterion_8_separation_witnesses():
    lines, ok = [], True
    for n in (8, 12):
        for i, j in itertools.combinations(range(3, n + 1), 2):
            rep = adjacency_family_report(n, i, j)
            made = gen.sp_er_pair(n, i, j)
            # independent evaluation of the two ER values at (v1, v2)
            g_val = float(matrix_tree_er(made.graph, 0, 1))
            h_val = float(matrix_tree_er(made.partner, 0, 1))
            sp_g = nx.shortest_path_length(to_nx(made.graph), 0, 1)
            sp_h = nx.shortest_path_length(to_nx(made.partner), 0, 1)
            good = (
                rep.avoiding_agree
                and abs(g_val - 1) < 1e-12
                and abs(h_val - 1) < 1e-12
                and sp_g != sp_h
                and (rep.sp_g_v1v2, rep.sp_h_v1v2) == (sp_g, sp_h)
            )
            ok &= good
            lines.append((n, i, j, good))
    report(8, "ER/SP separation family", ok, f"{len(lines)} (n, i, j) triples for n in {{8, 12}}, failing: {[x for x in lines if not x[3]]}")
    assert ok


# ---------- 9. invariant suite ----------


def test_criterion_9_invariant_suite():
    problems = []
    rng = np.random.default_rng(909)
    corpus = connected_corpus(40, (3, 14), seed=9, weights=(0.5, 2.0))

    for g in corpus:
        r = all_pairs_er(g).values
        off = r[~np.eye(g.n, dtype=bool)]
        if not (np.allclose(r, r.T, atol=1e-12) and np.all(np.diag(r) == 0) and np.all(off > 0)):
            problems.append("metric: symmetry/positivity")
        # entry [x, y, z] is R(x, z) - R(x, y) - R(y, z)
        viol = (r[:, None, :] - r[:, :, None] - r[None, :, :]).max()
        if viol > 1e-8:
            problems.append(f"metric: triangle {viol}")
        # Rayleigh monotonicity: raising any pair's weight never increases a resistance
        u, v = sorted(int(x) for x in rng.choice(g.n, size=2, replace=False))
        heavier = g.with_weight(u, v, g.weight(u, v) + float(rng.uniform(0.1, 3)))
        if np.any(all_pairs_er(heavier).values > r + 1e-10):
            problems.append("rayleigh")
        # Thompson: electrical flow energy = R and no other unit flow is cheaper
        s, t = 0, g.n - 1
        flow = electrical_flow(g, s, t)
        ref = networkx_er(g, s, t)
        if abs(flow.energy - ref) > 1e-8 * max(1, ref):
            problems.append("thompson: energy != R")
        demand = np.zeros(g.n)
        demand[s], demand[t] = 1, -1
        if not np.allclose(net_outflow(g, flow.values), demand, atol=1e-9):
            problems.append("thompson: not a unit flow")
        base, cycles = tree_path_flow(g, s, t), cycle_basis_vectors(g)
        for _ in range(20):
            f = base + sum((rng.normal() * c for c in cycles), np.zeros(g.m))
            if flow_energy(g, f) < ref - 1e-9:
                problems.append("thompson: cheaper flow")

    # Nash-Williams on unweighted graphs with disjoint BFS-layer cuts
    for g in connected_corpus(40, (3, 16), seed=99):
        dist = nx.single_source_shortest_path_length(to_nx(g), 0)
        t = max(dist, key=lambda x: (dist[x], x))
        bound = 0.0
        for i in range(dist[t]):
            cut = [(a, b) for a, b, _ in g.edges if (dist[a] <= i) != (dist[b] <= i)]
            bound += 1 / len(cut)
        if effective_resistance(g, 0, t).value < bound - 1e-10:
            problems.append("nash-williams")

    # tree-decomposition distance bound
    td_cases = [
        (gen.path(20), gen.path_decomposition(20)),
        (gen.cycle(10), gen.cycle_decomposition(10)),
    ]
    for seed in range(10):
        c = gen.caterpillar(30, seed=seed)
        td_cases.append((c.graph, c.td))
        k = gen.random_partial_ktree(20, 1 + seed % 3, seed=seed)
        td_cases.append((k.graph, k.td))
    worst_ratio = 0.0
    for g, td in td_cases:
        rep = pt.td_distance_bound_check(g, td, samples=200, seed=0)
        worst_ratio = max(worst_ratio, rep.max_ratio / rep.factor)
        if not rep.holds:
            problems.append(f"td bound n={g.n}")

    ok = not problems
    report(
        9,
        "invariant suite",
        ok,
        f"metric/Rayleigh/Thompson on 40 weighted graphs, Nash-Williams on 40, td bound on {len(td_cases)} "
        f"decompositions (max r_T/(factor*R) = {worst_ratio:.3f}); problems {problems[:5]}",
    )
    assert ok
