import itertools
import math

import networkx as nx
import pytest

from pathfree.graphcore import (C5_MASK, INFINITE, EdgeListError, Graph, ParameterError,
                                complete_bipartite, complete_graph, connected_graphs,
                                count_induced_copies, count_induced_paths, cycle_graph, diameter,
                                disjoint_union, dumps_edge_list, enumerate_pattern_catalog,
                                find_induced_path, induced_c4_exists, induced_path_exists,
                                induced_path_exists_by_subsets, is_induced_path, join,
                                loads_edge_list, ordered_induced_path_exists, path_graph,
                                pattern_mask, petersen_graph, random_cograph, random_gnp,
                                random_p5_free, star_graph)
from nx_oracles import has_induced_path as nx_has_induced_path


def test_graph_rejects_self_loop_and_range():
    with pytest.raises(ParameterError):
        Graph(3, [(1, 1)])
    with pytest.raises(ParameterError):
        Graph(3, [(0, 3)])
    with pytest.raises(ParameterError):
        Graph(2, [(0, 1)], colors=[1])


def test_adjacency_symmetric():
    g = random_gnp(20, 0.3, 1)
    for u in g.nodes():
        for v in g.neighbors(u):
            assert u in g.neighbor_set(v)


@pytest.mark.parametrize("g,k,expected", [
    (path_graph(5), 5, True),
    (complete_graph(5), 4, False),
    (cycle_graph(5), 5, False),
    (cycle_graph(5), 4, True),
])
def test_induced_path_examples(g, k, expected):
    assert induced_path_exists(g, k) is expected


def test_induced_path_out_of_range():
    with pytest.raises(ParameterError):
        induced_path_exists(path_graph(3), 4)


@pytest.mark.parametrize("seed", range(40))
def test_path_search_matches_networkx(seed):
    g = random_gnp(9, 0.35, seed)
    for k in (3, 4, 5, 6):
        assert induced_path_exists(g, k) == nx_has_induced_path(g, k)


def test_path_search_agrees_with_subset_oracle_on_small_corpus():
    for g in connected_graphs(6):
        for k in (4, 5):
            if g.node_count >= k:
                assert induced_path_exists(g, k) == induced_path_exists_by_subsets(g, k)


def test_found_path_is_induced():
    g = petersen_graph()
    res = find_induced_path(g, 5)
    assert res.found and is_induced_path(g, res.path)
    assert find_induced_path(g, 6).status == "absent"


def test_budget_reports_inconclusive():
    g = random_gnp(80, 0.5, 3)
    res = find_induced_path(g, 30, time_budget=0.01)
    assert res.status in ("budget", "absent")


def test_count_induced_copies():
    assert count_induced_copies(cycle_graph(5), cycle_graph(5)) == 1
    assert count_induced_copies(complete_graph(5), cycle_graph(5)) == 0
    assert count_induced_copies(petersen_graph(), cycle_graph(5)) == 12


def test_petersen_c5_count_by_networkx():
    G = nx.petersen_graph()
    C5 = nx.cycle_graph(5)
    n = sum(1 for s in itertools.combinations(G, 5) if nx.is_isomorphic(G.subgraph(s), C5))
    assert n == 12


def test_ordered_paths():
    p3 = path_graph(3)
    assert ordered_induced_path_exists(p3.with_colors([1, 2, 3]), 3)
    assert ordered_induced_path_exists(p3.with_colors([3, 2, 1]), 3)
    assert not ordered_induced_path_exists(complete_graph(3).with_colors([1, 2, 3]), 3)
    with pytest.raises(ParameterError):
        ordered_induced_path_exists(p3, 3)


def test_diameter():
    assert diameter(path_graph(4)) == 3
    assert diameter(complete_graph(4)) == 1
    assert diameter(Graph(4, [(0, 1), (2, 3)])) == INFINITE


def test_catalog_properties():
    cat = enumerate_pattern_catalog()
    assert C5_MASK in cat
    assert pattern_mask(star_graph(4).edges()) not in cat
    graphs = [nx.Graph([(u, v) for u, v in Graph(5, _edges(m)).edges()]) for m in cat.patterns]
    for a, b in itertools.combinations(graphs, 2):
        assert not nx.is_isomorphic(a, b)


def _edges(mask):
    pairs = list(itertools.combinations(range(5), 2))
    return [pairs[i] for i in range(10) if mask >> i & 1]


def test_c4_oracle():
    assert induced_c4_exists(cycle_graph(4))
    assert not induced_c4_exists(complete_graph(4))
    assert not induced_c4_exists(cycle_graph(5))
    assert induced_c4_exists(complete_bipartite(2, 3))


def test_edge_list_roundtrip_and_errors():
    g = random_gnp(12, 0.3, 5).with_colors([1 + v % 3 for v in range(12)])
    assert loads_edge_list(dumps_edge_list(g)) == g
    with pytest.raises(EdgeListError) as e:
        loads_edge_list("3 1\n0 x\n")
    assert e.value.line == 2
    with pytest.raises(EdgeListError):
        loads_edge_list("3 2\n0 1\n")


def test_generators_are_seeded():
    assert random_gnp(30, 0.2, 7) == random_gnp(30, 0.2, 7)
    g = random_cograph(25, 4)
    assert not induced_path_exists(g, 4)
    h = random_p5_free(20, 2)
    assert not induced_path_exists(h, 5)


def test_connected_corpus_sizes():
    # connected graphs on 1..8 nodes, one per isomorphism class (OEIS A001349)
    counts = [sum(1 for g in connected_graphs(8) if g.node_count == k) for k in range(1, 9)]
    assert counts == [1, 1, 2, 6, 21, 112, 853, 11117]


def test_join_and_union_are_cographs():
    g = join(disjoint_union(complete_graph(2), Graph(1)), cycle_graph(4))
    assert not induced_path_exists(g, 4)


def test_count_induced_paths_small():
    assert count_induced_paths(path_graph(6), 5) == 2
    assert math.comb(5, 5) == 1
