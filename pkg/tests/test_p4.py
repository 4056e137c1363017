import networkx as nx
import pytest

from pathfree.congest import NetworkConfig
from pathfree.families import p4_scaling_cograph
from pathfree.graphcore import (Graph, add_universal_vertex, complete_bipartite, complete_graph,
                                connected_graphs, cycle_graph, induced_path_exists, path_graph,
                                random_cograph, random_connected_gnp, star_graph)
from pathfree.p4 import (build_depth2_tree, decide_p4_free, decide_p4_majority,
                         fingerprint_modulus, is_probable_prime, next_prime, sketch_and_refer)

CFG = NetworkConfig(seed=3)


def nx_is_cograph(g: Graph) -> bool:
    """Recursive complement-decomposition test, independent of the path search."""
    G = nx.Graph()
    G.add_nodes_from(g.nodes())
    G.add_edges_from(g.edges())

    def rec(H):
        if H.number_of_nodes() <= 1:
            return True
        if not nx.is_connected(H):
            return all(rec(H.subgraph(c).copy()) for c in nx.connected_components(H))
        C = nx.complement(H)
        if not nx.is_connected(C):
            return all(rec(H.subgraph(c).copy()) for c in nx.connected_components(C))
        return False
    return rec(G)


def test_primes():
    assert [k for k in range(2, 30) if is_probable_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert next_prime(90) == 97
    assert fingerprint_modulus(10) >= 2 ** 40


def test_tree_on_k23():
    g = complete_bipartite(2, 3)
    out = build_depth2_tree(g, CFG)
    t = out.tree
    assert t is not None
    assert g.degree(t.root) == 3
    assert max(t.depth.values()) <= 2
    for v, p in t.parent.items():
        assert g.has_edge(v, p) and t.depth[v] == t.depth[p] + 1


def test_tree_on_star_has_no_depth2():
    out = build_depth2_tree(star_graph(9), CFG)
    assert out.tree is not None
    assert sum(1 for d in out.tree.depth.values() if d == 2) == 0


def test_p4_is_rejected_somewhere():
    assert not decide_p4_free(path_graph(4), CFG).accept


@pytest.mark.parametrize("g,accept", [
    (complete_graph(4), True),
    (cycle_graph(5), False),
    (complete_bipartite(2, 2), True),
])
def test_referee_examples(g, accept):
    tree = build_depth2_tree(g, CFG).tree
    if tree is None:
        assert not accept
        return
    verdict, _, _ = sketch_and_refer(g, tree, CFG)
    assert (verdict == "accept") is accept


@pytest.mark.parametrize("seed", range(15))
def test_random_cographs_accepted(seed):
    g = random_cograph(12 + seed, seed)
    assert nx_is_cograph(g)
    assert decide_p4_majority(g, CFG)[0]


def test_c5_plus_universal_rejected():
    assert not decide_p4_majority(add_universal_vertex(cycle_graph(5)), CFG)[0]


def test_oracles_agree_on_six_nodes():
    for g in connected_graphs(6):
        assert nx_is_cograph(g) == (g.node_count < 4 or not induced_path_exists(g, 4))


@pytest.mark.parametrize("seed", range(20))
def test_random_graphs_match(seed):
    g = random_connected_gnp(12 + seed, 0.3, seed)
    assert decide_p4_majority(g, CFG)[0] == nx_is_cograph(g)


def test_bits_within_bandwidth():
    g = p4_scaling_cograph(128, 0)
    r = decide_p4_free(g, CFG)
    assert r.accept
    assert r.max_bits <= CFG.bandwidth(128)


def test_replay_digest():
    g = random_cograph(30, 5)
    assert decide_p4_free(g, CFG).digest == decide_p4_free(g, CFG).digest
