"""Acceptance suite: one check per criterion, each echoing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines as they are
produced; they are also repeated in the terminal summary.
"""
import itertools

import networkx as nx
import numpy as np

from pathfree import certify, gadgets
from pathfree.congest import TALLY, NetworkConfig, distributed_diameter
from pathfree.families import diameter3_instances
from pathfree.graphcore import (connected_graphs, diameter, enumerate_pattern_catalog,
                                induced_c4_exists, induced_path_exists, random_connected_gnp,
                                random_gnp, random_p5_free)
from pathfree.p4 import decide_p4_free, decide_p4_majority
from pathfree.p5 import P5Params, decide_p5_free, decide_p5_majority, p_collect
from pathfree.quantum_c4 import (VARIANTS, QuantumCostModel, exponent_sweep, majority_detect)
from pathfree.suites import (_gadget_inputs, central_difference, corpus, fitted_constant,
                             least_squares_constant, p4_scaling_rows, p5_scaling_rows, stable)

DENSE = P5Params(branch="dense")
SEEDS = (0, 1, 2)


def _has_path(g, k):
    return g.node_count >= k and induced_path_exists(g, k)


def test_criterion_1_p4_agreement(criterion):
    items = corpus(8, 300, (10, 50), seed=1)
    bad = []
    for name, g in items:
        verdict, _ = decide_p4_majority(g, NetworkConfig(seed=7))
        if verdict != (not _has_path(g, 4)):
            bad.append(name)
    ok = criterion(1, not bad, f"{len(items)} instances, {len(bad)} disagreements {bad[:5]}")
    assert ok


def test_criterion_2_p5_agreement(criterion):
    items = corpus(8, 300, (10, 60), seed=2)
    bad, dense_bad, unbacked = [], [], []
    collect_rejects = 0
    for name, g in items:
        truth = not _has_path(g, 5)
        verdict, _ = decide_p5_majority(g, NetworkConfig(seed=7))
        if verdict != truth:
            bad.append(name)
        if g.node_count < 4 or diameter(g) != 3:
            continue
        verdict, runs = decide_p5_majority(g, NetworkConfig(seed=9), DENSE)
        if verdict != truth:
            dense_bad.append(name)
        reasons = [r.reason for r in runs if r.branch == "diam3"]
        for s in SEEDS:
            st, _ = p_collect(g, NetworkConfig(seed=100 + s))
            reasons += [c for _, c in st.rejections[:1]]
        hits = [x for x in reasons if x.startswith("cond")]
        collect_rejects += len(hits)
        if hits and truth:
            unbacked.append(name)
    ok = not bad and not dense_bad and not unbacked and collect_rejects > 0
    criterion(2, ok, f"{len(items)} instances, {len(bad)} disagreements (default), "
                     f"{len(dense_bad)} (dense branch), {collect_rejects} collect rejects, "
                     f"{len(unbacked)} unbacked")
    assert ok


def test_criterion_3_round_bounds(criterion):
    parts, ok = [], True
    p4 = [p4_scaling_rows([2 ** k for k in range(6, 13)], s) for s in SEEDS]
    bound = max(fitted_constant(r) for r in p4)
    fits = [least_squares_constant(r) for r in p4]
    holds = all(r["rounds"] <= bound * r["bound"] for rows in p4 for r in rows)
    ok &= holds and stable(fits)
    parts.append(f"P4 C4={bound:.3g} fitted={[round(f, 3) for f in fits]} "
                 f"per-seed max ratio={[round(fitted_constant(r), 3) for r in p4]}")
    for fam, branch in (("hub", None), ("two-hub", None), ("two-hub", "dense")):
        rows = [p5_scaling_rows([2 ** k for k in range(5, 10)], s, fam, branch) for s in SEEDS]
        bound = max(fitted_constant(r) for r in rows)
        fits = [least_squares_constant(r) for r in rows]
        ok &= stable(fits) and all(r["rounds"] <= bound * r["bound"] for rs in rows for r in rs)
        parts.append(f"P5[{fam},{rows[0][0]['branch']}] C5={bound:.3g} "
                     f"fitted={[round(f, 4) for f in fits]}")
    criterion(3, ok, "; ".join(parts))
    assert ok


def test_criterion_4_pattern_catalog(criterion):
    cat = enumerate_pattern_catalog()
    # independent count: 5-node graphs from the networkx atlas that have a Hamiltonian path
    atlas = [G for G in nx.graph_atlas_g() if G.number_of_nodes() == 5]
    traceable = [G for G in atlas
                 if any(all(G.has_edge(a, b) for a, b in zip(p, p[1:]))
                        for p in itertools.permutations(range(5)))]
    non_path = [G for G in traceable if not nx.is_isomorphic(G, nx.path_graph(5))]
    cross = len(cat.patterns) in (len(traceable), len(non_path))
    ok = len(cat.patterns) == 16 and cross
    criterion(4, ok, f"catalog has {len(cat.patterns)} patterns; independent count: "
                     f"{len(traceable)} traceable 5-node graphs, {len(non_path)} excluding P5; "
                     f"expected 16")
    assert ok


def test_criterion_5_counting_identity(criterion):
    checked, wrong, tried = 0, [], 0
    for g in diameter3_instances(4000, seed=5, max_flips=2):
        tried += 1
        r = decide_p5_free(g, NetworkConfig(seed=tried), DENSE)
        if r.t is None or r.state is None or not r.state.hidden():
            continue
        checked += 1
        if r.t != central_difference(g, r.state.hidden()):
            wrong.append(tried)
        if checked == 100:
            break
    ok = checked == 100 and not wrong
    criterion(5, ok, f"{checked} eligible instances (of {tried} generated), {len(wrong)} mismatches")
    assert ok


def test_criterion_6_certification(criterion):
    free = [g for g in connected_graphs(8) if not _has_path(g, 5)]
    rng = np.random.default_rng(6)
    free += [random_p5_free(int(n), int(rng.integers(1 << 30))) for n in rng.integers(10, 121, 100)]
    incomplete = sum(not certify.verify(g, certify.prove(g)).all_accept for g in free)
    consts = [(g.node_count, certify.size_constant(certify.prove(g))) for g in free
              if g.node_count >= 8]
    C = max(c for _, c in consts)
    big = max(c for n, c in consts if n >= 64)
    nonfree = [g for g in connected_graphs(6) if _has_path(g, 5)]
    nonfree += [g for g in (random_connected_gnp(int(n), 0.3, 60 + i)
                            for i, n in enumerate(rng.integers(8, 31, 40))) if _has_path(g, 5)]
    escaped = 0
    for i, g in enumerate(nonfree):
        b = certify.prove(g, seed=i)
        for j in range(100):
            bad = certify.semantic_mutant(b, certify.SEMANTIC_KINDS[j % len(certify.SEMANTIC_KINDS)], rng)
            escaped += certify.verify(g, bad).all_accept
        escaped += certify.verify(g, b).all_accept
    ok = incomplete == 0 and escaped == 0 and big <= C
    criterion(6, ok, f"completeness {len(free) - incomplete}/{len(free)}; size constant C={C:.3g} "
                     f"(n>=8), {big:.3g} at n>=64; {len(nonfree) * 100} mutants on "
                     f"{len(nonfree)} non-free instances, {escaped} accepted")
    assert ok


def _sweep(family, n, pairs, d=3):
    out = {"pass": 0, "fail": 0, "inconclusive": 0}
    for x, y in pairs:
        gg = gadgets.build_p8d(x, y, n, d) if family == "P8d_d3plus" else {
            "P11_d1": gadgets.build_p11, "ORDERED_P5": gadgets.build_ordered_p5,
            "P22_d2": gadgets.build_p22}[family](x, y, n)
        out[gadgets.check_iff(gg, gadgets.disj(x, y), 60.0).outcome] += 1
    return out


def test_criterion_7_gadgets(criterion):
    parts, ok = [], True
    for family in ("P11_d1", "ORDERED_P5"):
        res = _sweep(family, 2, _gadget_inputs(family, 2, "exhaustive", 0, 0))
        ok &= res["pass"] == 256
        parts.append(f"{family} {res['pass']}/256")
    for family, n, count in (("P22_d2", 4, 20), ("P8d_d3plus", 8, 5)):
        res = _sweep(family, n, _gadget_inputs(family, n, "sampled", count, 7))
        ok &= res["fail"] == 0 and res["inconclusive"] <= 0.2 * count
        parts.append(f"{family} pass={res['pass']} fail={res['fail']} "
                     f"inconclusive={res['inconclusive']}/{count}")
    cuts = []
    for n in (2, 3, 4):
        z = "0" * (n * n)
        cuts.append(gadgets.cut_size(gadgets.build_p11(z, z, n)) == 2 * n)
        cuts.append(gadgets.cut_size(gadgets.build_ordered_p5(z, z, n)) == 2 * n)
    cuts.append(gadgets.cut_size(gadgets.build_p22("0" * 16, "0" * 16, 4)) == 8 * 2)
    cuts.append(gadgets.cut_size(gadgets.build_p8d("0" * 64, "0" * 64, 8, 3)) == 2 * 3 * 2)
    ok &= all(cuts)
    parts.append(f"cut sizes exact: {all(cuts)}")
    criterion(7, ok, "; ".join(parts))
    assert ok


def test_criterion_8_quantum_c4(criterion):
    wrong = sum(majority_detect(g, seed=i) != induced_c4_exists(g)
                for i, g in enumerate(random_gnp(64, 0.1, 800 + i) for i in range(200)))
    sizes = [2 ** k for k in range(8, 15)]
    fits = {v: exponent_sweep(sizes, variant=v, cost=QuantumCostModel(log_exponent=0))
            for v in VARIANTS}
    logged = {v: exponent_sweep(sizes, variant=v, cost=QuantumCostModel()) for v in VARIANTS}
    slope = fits["bucketed"].slope
    order = all(a >= b >= c for f in (fits, logged) for a, b, c in
                zip(f["naive"].rounds, f["amplified"].rounds, f["bucketed"].rounds))
    ok = wrong == 0 and 0.67 <= slope <= 0.83 and order
    criterion(8, ok, f"200 instances, {wrong} mismatches; exponent {slope:.3f} "
                     f"(log-factor policy: {logged['bucketed'].slope:.3f}); "
                     f"naive>=amplified>=bucketed at every point: {order}")
    assert ok


def test_criterion_9_simulator_integrity(criterion):
    g = random_connected_gnp(40, 0.15, 9)
    d3 = next(iter(diameter3_instances(1, seed=9)))
    cfg = NetworkConfig(seed=1234, trace=True)
    pairs = [
        (decide_p4_free(g, cfg).digest, decide_p4_free(g, cfg).digest),
        (decide_p5_free(d3, cfg, DENSE).digest, decide_p5_free(d3, cfg, DENSE).digest),
        (distributed_diameter(g, cfg)[1].digest(), distributed_diameter(g, cfg)[1].digest()),
    ]
    same = all(a == b for a, b in pairs)
    ok = same and not TALLY.violations and TALLY.runs > 0
    criterion(9, ok, f"{TALLY.runs} simulator runs so far, {len(TALLY.violations)} violations; "
                     f"replay digests identical: {same}")
    assert ok
