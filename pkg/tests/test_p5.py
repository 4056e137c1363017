import pytest

from nx_oracles import has_induced_path
from pathfree.congest import NetworkConfig
from pathfree.families import diameter3_instances, hub_graph, module_blowup, two_hub_graph
from pathfree.graphcore import (complete_graph, cycle_graph, diameter, path_graph, petersen_graph,
                                random_connected_gnp, random_p5_free)
from pathfree.p5 import (P5Params, count_dangerous, count_p5, decide_diameter2, decide_p5_free,
                         decide_p5_majority, detect_special_paths, group_count, p_collect)

CFG = NetworkConfig(seed=11)
DENSE = P5Params(branch="dense")


def test_count_p5_on_path_and_cycle():
    assert count_p5([set(path_graph(5).neighbors(v)) for v in range(5)]) == 1
    assert count_p5([set(cycle_graph(5).neighbors(v)) for v in range(5)]) == 0


@pytest.mark.parametrize("g,accept", [
    (petersen_graph(), False),
    (complete_graph(6), True),
    (cycle_graph(5), True),
])
def test_diameter2_examples(g, accept):
    ok, log = decide_diameter2(g, CFG)
    assert ok is accept
    assert not log.violations


def test_diameter2_refuses_larger_diameter():
    with pytest.raises(ValueError):
        decide_diameter2(path_graph(4), CFG)


def test_path_rejected_by_diameter():
    r = decide_p5_free(path_graph(5), CFG)
    assert r.accept is False and r.reason == "diameter"


def test_c5_accepted():
    assert decide_p5_free(cycle_graph(5), CFG).accept


def test_no_intralayer_edges_means_nothing_hidden():
    g = path_graph(4)
    st, _ = p_collect(g, CFG)
    assert not st.e22 and not st.e33 and not st.fbad
    assert st.edges_at_r == set(g.edges())


def test_group_count_positive():
    assert group_count(100, 500, 10) >= 1


@pytest.mark.parametrize("seed", range(30))
def test_collect_rejections_are_backed(seed):
    g = next(iter(diameter3_instances(1, seed=seed, max_flips=3)))
    st, _ = p_collect(g, CFG.derive(seed))
    if st.rejections:
        assert has_induced_path(g, 5)


@pytest.mark.parametrize("seed", range(12))
def test_blowups_without_flips_are_accepted(seed):
    g = module_blowup(seed)
    if diameter(g) != 3:
        pytest.skip("base blew up to a different diameter")
    r = decide_p5_free(g, CFG, DENSE)
    assert r.accept
    assert not detect_special_paths(g, r.state)[0]
    per, local, _ = count_dangerous(g, r.state)
    assert r.t == local == sum(per)


@pytest.mark.parametrize("seed", range(25))
def test_dense_branch_matches_oracle(seed):
    g = next(iter(diameter3_instances(1, seed=100 + seed)))
    ok, runs = decide_p5_majority(g, CFG, DENSE)
    assert ok == (not has_induced_path(g, 5))
    for r in runs:
        if r.accept is False and r.reason.startswith("cond"):
            assert has_induced_path(g, 5)


@pytest.mark.parametrize("seed", range(20))
def test_random_graphs_match(seed):
    g = random_connected_gnp(11 + seed % 5, 0.35, seed)
    assert decide_p5_majority(g, CFG)[0] == (not has_induced_path(g, 5))


@pytest.mark.parametrize("seed", range(6))
def test_p5_free_generator_accepted_on_both_branches(seed):
    g = random_p5_free(14, seed)
    assert decide_p5_majority(g, CFG)[0]
    if diameter(g) <= 3:
        assert decide_p5_majority(g, CFG, DENSE)[0]


def test_families_have_promised_diameter():
    assert diameter(hub_graph(40, 1)) <= 2
    assert diameter(two_hub_graph(40, 1)) == 3


def test_rounds_and_bits_logged():
    g = two_hub_graph(32, 0)
    r = decide_p5_free(g, CFG, DENSE)
    assert r.rounds > 0 and r.max_bits <= CFG.bandwidth(32)
    assert r.digest == decide_p5_free(g, CFG, DENSE).digest
