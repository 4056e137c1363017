import math

import numpy as np
import pytest

from nx_oracles import has_induced_c4
from pathfree.graphcore import (Graph, ParameterError, complete_graph, cycle_graph,
                                induced_c4_exists, random_gnp, star_graph)
from pathfree.quantum_c4 import (VARIANTS, QuantumCostModel, charged_rounds_only,
                                 detect_heavy_c4, detect_induced_c4, detect_light_c4,
                                 exponent_sweep, has_ordered_p3, is_induced_c4,
                                 light_set_formula, majority_detect, ordered_p3_reduction)


def cycle_of_cliques(k: int) -> Graph:
    """Four cliques of size k arranged in a cycle, consecutive cliques fully joined."""
    blocks = [list(range(i * k, (i + 1) * k)) for i in range(4)]
    edges = [(a, b) for blk in blocks for i, a in enumerate(blk) for b in blk[i + 1:]]
    for i in range(4):
        edges += [(a, b) for a in blocks[i] for b in blocks[(i + 1) % 4]]
    return Graph(4 * k, edges)


def test_light_c4_found_and_charged():
    cost = QuantumCostModel()
    r = detect_light_c4(cycle_graph(4), 2, cost)
    assert r.found and is_induced_c4(cycle_graph(4), r.witness)
    bound = math.ceil(cost.search_constant * math.sqrt(4)) * cost.polylog(4) + 2
    assert r.charged_rounds <= bound


def test_light_none_on_k4():
    assert not detect_light_c4(complete_graph(4), 4, QuantumCostModel()).found


def test_light_edgeless_charges_nothing():
    cost = QuantumCostModel()
    r = detect_light_c4(Graph(5), 3, cost)
    assert not r.found and r.charged_rounds == 0


def test_light_formula_on_c4():
    assert light_set_formula(cycle_graph(4), 0, 1, 2) == {2}


@pytest.mark.parametrize("seed", range(3))
def test_heavy_finds_cycle_among_heavy_nodes(seed):
    g = cycle_of_cliques(5)
    assert min(g.degree(v) for v in g.nodes()) > 4
    r = detect_heavy_c4(g, 4, QuantumCostModel(), np.random.default_rng(seed))
    assert r.found and is_induced_c4(g, r.witness)


def test_heavy_none_on_clique():
    assert not detect_heavy_c4(complete_graph(5), 2, QuantumCostModel(), 0).found


@pytest.mark.parametrize("g,found", [(cycle_graph(4), True), (cycle_graph(5), False)])
def test_full_detector_examples(g, found):
    assert detect_induced_c4(g).found is found


def test_corpus_matches_networkx():
    for seed in range(60):
        g = random_gnp(40, 0.1, seed)
        truth = has_induced_c4(g) if seed < 10 else induced_c4_exists(g)
        assert majority_detect(g, seed=seed) == truth


def test_variant_costs_are_ordered():
    g = random_gnp(1024, 8 / 1024, 1)
    costs = [sum(charged_rounds_only(g, QuantumCostModel(), v).values()) for v in VARIANTS]
    assert costs[0] >= costs[1] >= costs[2]


def test_amplify_rejects_zero_probability():
    with pytest.raises(ParameterError):
        QuantumCostModel().amplify(0.0, 1, 1)


def test_exponent_sweep_is_sublinear():
    fit = exponent_sweep(sizes=(256, 512, 1024, 2048), cost=QuantumCostModel(log_exponent=0))
    assert 0.5 < fit.slope < 1.0


def test_reduction_on_c4_finds_ordered_p3_often():
    g = cycle_graph(4)
    rng = np.random.default_rng(0)
    hits = sum(any(has_ordered_p3(ordered_p3_reduction(g, 0, rng)) for _ in range(4))
               for _ in range(100))
    assert hits >= 95


def test_reduction_on_k4_never_hits():
    for seed in range(32):
        assert not has_ordered_p3(ordered_p3_reduction(complete_graph(4), 0, seed))


def test_reduction_on_star_centre():
    inst = ordered_p3_reduction(star_graph(3), 0, 0)
    assert all(c != 2 for c in inst.graph.colors)
    assert not has_ordered_p3(inst)


def test_reduction_rejects_bad_node():
    with pytest.raises(ParameterError):
        ordered_p3_reduction(cycle_graph(4), 9)
