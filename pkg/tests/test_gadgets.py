import itertools

import networkx as nx
import numpy as np
import pytest

from nx_oracles import has_induced_path, has_ordered_path, to_nx
from pathfree.gadgets import (GadgetError, build_nof_p5, build_ordered_p5, build_p11, build_p22,
                              build_p8d, check_iff, cut_size, disj, lengthen_for_locality,
                              p22_block_counts, single_triangle_base, triangle_base,
                              validate_base)
from pathfree.graphcore import Graph, induced_path_exists, is_induced_path

BUDGET = 60.0


def nx_cut(gg) -> int:
    return len(list(nx.edge_boundary(to_nx(gg.graph), gg.alice, gg.bob)))


def test_disj():
    assert disj("0101", "0010") == 1
    assert disj("0101", "0100") == 0


def test_length_mismatch():
    with pytest.raises(GadgetError):
        build_p11("0000", "000", 2)
    with pytest.raises(GadgetError):
        build_p22("0" * 9, "0" * 9, 3)
    with pytest.raises(GadgetError):
        build_p8d("0" * 25, "0" * 25, 5, 3)


def test_p11_disjoint_zero_inputs():
    assert not induced_path_exists(build_p11("0000", "0000", 2).graph, 11)


def test_p11_shared_bit_has_canonical_path():
    gg = build_p11("1000", "1000", 2)
    assert gg.witness is not None and is_induced_path(gg.graph, gg.witness)
    assert len(gg.witness) == 11
    names = [gg.names[v] for v in gg.witness]
    assert names[:2] == ["p", "q"] and names[-2:] == ["r", "s"]


@pytest.mark.parametrize("pair", [("0000", "0000"), ("1000", "1000"), ("0110", "1001"),
                                  ("1111", "0001"), ("0101", "1010")])
def test_p11_matches_networkx(pair):
    x, y = pair
    assert has_induced_path(build_p11(x, y, 2).graph, 11) == (disj(x, y) == 0)


def test_p11_exhaustive():
    for a, b in itertools.product(range(16), repeat=2):
        x, y = format(a, "04b"), format(b, "04b")
        assert check_iff(build_p11(x, y, 2), disj(x, y), BUDGET).outcome == "pass"


def test_p11_monotone_in_x():
    for a in range(16):
        x = format(a, "04b")
        base = set(build_p11(x, "0110", 2).graph.edges())
        for i in range(4):
            if x[i] == "0":
                x2 = x[:i] + "1" + x[i + 1:]
                assert set(build_p11(x2, "0110", 2).graph.edges()) <= base


def test_ordered_examples():
    assert has_ordered_path(build_ordered_p5("1111", "1111", 2).graph, 5)
    assert not has_ordered_path(build_ordered_p5("1111", "0000", 2).graph, 5)


def test_ordered_exhaustive_against_networkx():
    for a, b in itertools.product(range(16), repeat=2):
        x, y = format(a, "04b"), format(b, "04b")
        gg = build_ordered_p5(x, y, 2)
        assert check_iff(gg, disj(x, y)).outcome == "pass"
        assert has_ordered_path(gg.graph, 5) == (disj(x, y) == 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_two_party_cut_sizes(n):
    z = "0" * (n * n)
    for gg in (build_p11(z, z, n), build_ordered_p5(z, z, n)):
        assert cut_size(gg) == nx_cut(gg) == 2 * n
        assert gg.alice | gg.bob == frozenset(gg.graph.nodes()) and not gg.alice & gg.bob


@pytest.mark.parametrize("n", [4, 9])
def test_p22_cut_size(n):
    z = "0" * (n * n)
    gg = build_p22(z, z, n)
    root = int(round(n ** 0.5))
    assert cut_size(gg) == nx_cut(gg) == 8 * root


def test_p8d_cut_size():
    gg = build_p8d("0" * 64, "0" * 64, 8, 3)
    assert cut_size(gg) == nx_cut(gg) == 2 * 3 * 2
    assert gg.graph.node_count == 120


def test_p22_zero_inputs_free():
    z = "0" * 16
    assert check_iff(build_p22(z, z, 4), 1, BUDGET).outcome == "pass"


def test_p22_shared_bit_has_path():
    s = "1" + "0" * 15
    gg = build_p22(s, s, 4)
    res = check_iff(gg, 0, BUDGET)
    assert res.outcome == "pass"

def test_p22_witness_uses_two_nodes_per_block():
    s = "1" + "0" * 15
    gg = build_p22(s, s, 4)
    res = check_iff(gg, 0, BUDGET)
    assert res.has_path
    counts = p22_block_counts(gg, res.path)
    assert all(counts.get(b) == 2 for b in ("a1", "a2", "b1", "b2", "uA", "uB", "lA", "lB"))
    assert all(counts.get(h) == 1 for h in "pqrsxy")


def test_p22_one_sided_input_free():
    assert check_iff(build_p22("1" * 16, "0" * 16, 4), 1, BUDGET).outcome == "pass"


def test_p8d_zero_inputs_free():
    z = "0" * 64
    assert check_iff(build_p8d(z, z, 8, 3), 1, BUDGET).outcome == "pass"


def test_p8d_shared_bit_has_path():
    s = "1" + "0" * 63
    assert check_iff(build_p8d(s, s, 8, 3), 0, BUDGET).outcome == "pass"


def test_nof_single_triangle():
    base = single_triangle_base()
    assert induced_path_exists(build_nof_p5("1", "1", "1", base).graph, 5)
    assert not induced_path_exists(build_nof_p5("1", "0", "1", base).graph, 5)


def test_nof_against_networkx_on_small_base():
    base = triangle_base(2)
    t = len(base.triangles)
    rng = np.random.default_rng(0)
    for _ in range(6):
        xs = ["".join(map(str, rng.integers(0, 2, t))) for _ in range(3)]
        gg = build_nof_p5(*xs, base)
        shared = any(all(x[i] == "1" for x in xs) for i in range(t))
        assert has_induced_path(gg.graph, 5) == shared


def test_base_validation_names_an_edge():
    sq = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    with pytest.raises(GadgetError, match=r"\("):
        validate_base(sq, ((0, 2), (1,), (3,)))


def test_lengthening_schedule():
    gg = build_nof_p5("1", "1", "1", single_triangle_base())
    assert lengthen_for_locality(gg, 1) is gg
    assert lengthen_for_locality(gg, 2).k_target == 9
    assert lengthen_for_locality(gg, 3).k_target == 13


def test_lengthened_nof_keeps_path_when_shared():
    gg = lengthen_for_locality(build_nof_p5("1", "1", "1", single_triangle_base()), 2)
    assert induced_path_exists(gg.graph, gg.k_target)


def test_lengthened_nof_stays_free_when_disjoint():
    gg = lengthen_for_locality(build_nof_p5("1", "0", "1", single_triangle_base()), 2)
    assert not induced_path_exists(gg.graph, gg.k_target)


def test_p22_lengthening_target():
    s = "1" + "0" * 15
    gg = lengthen_for_locality(build_p22(s, s, 4), 2)
    assert gg.k_target == 28
    assert check_iff(gg, 0, BUDGET).outcome == "pass"
