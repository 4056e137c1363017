import numpy as np
import pytest

from nx_oracles import has_induced_path
from pathfree.certify import (SEMANTIC_KINDS, CertificateBundle, certify_sum, flip_bit,
                              honest_sum, prove, semantic_mutant, size_constant, verify)
from pathfree.congest import bfs_tree
from pathfree.families import diameter3_instances
from pathfree.graphcore import (complete_graph, connected_graphs, cycle_graph, path_graph,
                                petersen_graph, random_connected_gnp, random_p5_free)


def test_c5_complete():
    assert verify(cycle_graph(5), prove(cycle_graph(5))).all_accept


def test_clique_complete():
    assert verify(complete_graph(6), prove(complete_graph(6))).all_accept


def test_petersen_rejected():
    v = verify(petersen_graph(), prove(petersen_graph()))
    assert v.rejecting


def test_diameter_four_not_certifiable():
    b = prove(path_graph(6))
    assert not b.certifiable
    assert not verify(path_graph(6), b).all_accept


def test_completeness_small_corpus():
    for g in connected_graphs(6):
        if g.node_count < 5 or not has_induced_path(g, 5):
            assert verify(g, prove(g)).all_accept


@pytest.mark.parametrize("seed", range(8))
def test_completeness_generated(seed):
    g = random_p5_free(16 + seed, seed)
    assert verify(g, prove(g, seed=seed)).all_accept


@pytest.mark.parametrize("seed", range(6))
def test_completeness_on_far_layers(seed):
    for g in diameter3_instances(3, seed=seed, max_flips=0):
        assert verify(g, prove(g, seed=seed)).all_accept


@pytest.mark.parametrize("seed", range(6))
def test_soundness_under_mutation(seed):
    g = random_connected_gnp(10, 0.3, seed)
    if not has_induced_path(g, 5):
        pytest.skip("instance happens to be free")
    b = prove(g, seed=seed)
    rng = np.random.default_rng(seed)
    for i in range(40):
        bad = semantic_mutant(b, SEMANTIC_KINDS[i % len(SEMANTIC_KINDS)], rng)
        assert not verify(g, bad).all_accept


def test_removed_neighbor_is_noticed_locally():
    g = cycle_graph(5)
    b = prove(g)
    rng = np.random.default_rng(0)
    for _ in range(10):
        bad = semantic_mutant(b, "edge-delete", rng)
        changed = [u for u in range(5) if bad.certs[u] != b.certs[u]]
        v = verify(g, bad)
        u = changed[0]
        assert set(v.rejecting) & ({u} | g.neighbor_set(u))


def test_bit_flips_never_crash():
    g = random_p5_free(12, 4)
    b = prove(g)
    for pos in range(0, 400, 7):
        verify(g, flip_bit(b, pos % 12, pos))


def test_serialization_roundtrip():
    g = random_p5_free(12, 1)
    b = prove(g)
    again = CertificateBundle.from_bytes(b.to_bytes())
    assert again.certs == b.certs
    assert verify(g, again).all_accept


def test_size_constant_bounded():
    g = random_p5_free(40, 2)
    assert size_constant(prove(g)) < 20


def test_sum_certificate():
    g = random_connected_gnp(20, 0.2, 1)
    tree = bfs_tree(g, 0)
    a = list(range(20))
    c = honest_sum(tree, a)
    assert all(certify_sum(tree, a, c)) and c.total == sum(a)
    c.total += 1
    assert not certify_sum(tree, a, c)[tree.root]


def test_sum_partial_mutation_sweep():
    g = random_connected_gnp(20, 0.2, 2)
    tree = bfs_tree(g, 0)
    a = [3] * 20
    for u in range(20):
        c = honest_sum(tree, a)
        c.partial[u] += 1
        verdict = certify_sum(tree, a, c)
        blamed = {u} | ({tree.parent[u]} if tree.parent[u] >= 0 else set())
        assert any(not verdict[w] for w in blamed)
