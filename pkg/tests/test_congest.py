import math

import networkx as nx
import numpy as np
import pytest

from pathfree.congest import (ConfigError, Echo, NetworkConfig, NodeProgram, bfs_tree,
                              convergecast_sum, convergecast_wide, distributed_bfs,
                              distributed_diameter, neighbor_exchange, pipeline_broadcast, run)
from pathfree.graphcore import (Graph, complete_graph, cycle_graph, diameter, path_graph,
                                random_connected_gnp, star_graph)

CFG = NetworkConfig(seed=1)


def test_echo_on_triangle():
    tr = run(lambda v: Echo(), complete_graph(3), CFG)
    assert tr.rounds_used == 1
    assert tr.messages == 6
    assert tr.node_outputs == [[1, 2], [0, 2], [0, 1]]


def test_neighbor_lists_on_star():
    g = star_graph(8)
    tr = neighbor_exchange(g, CFG)
    assert tr.rounds_used == 8
    assert tr.node_outputs[1][0] == tuple(range(1, 9))


class Shout(NodeProgram):
    def step(self, rnd, inbox):
        if rnd == 1:
            enc = self.view.encode
            return enc(("int", 0, self.view.bandwidth + 1))
        return None


@pytest.mark.allow_violations
def test_oversized_message_is_recorded():
    tr = run(lambda v: Shout(), path_graph(3), CFG)
    assert tr.status == "violation"
    assert tr.violations and tr.violations[0]["bits"] > tr.violations[0]["limit"]


class Chatter(NodeProgram):
    def step(self, rnd, inbox):
        return self.view.encode(("id", self.view.node))


def test_round_limit_times_out():
    tr = run(lambda v: Chatter(), path_graph(2), NetworkConfig(round_limit=5))
    assert tr.status == "timeout"


def test_bandwidth_must_carry_an_id():
    with pytest.raises(ConfigError):
        NetworkConfig(bandwidth_bits=2).validate(100)
    with pytest.raises(ConfigError):
        NetworkConfig(mode="multicast")


def test_pipeline_degrees_on_c6():
    g = cycle_graph(6)
    items = [[(("int", g.degree(v), 3),)] for v in range(6)]
    tr, know = pipeline_broadcast(items, g, CFG)
    assert tr.rounds_used <= 3 + 6
    for k in know:
        assert {o: vals[0] for (o, _), vals in k.items()} == {v: 2 for v in range(6)}


def test_pipeline_empty():
    tr, _ = pipeline_broadcast([[] for _ in range(5)], path_graph(5), CFG)
    assert tr.rounds_used == 0


def test_pipeline_reconstructs_k4():
    g = complete_graph(4)
    items = [[(("id", w),) for w in g.neighbors(v)] for v in range(4)]
    _, know = pipeline_broadcast(items, g, CFG)
    for k in know:
        edges = {tuple(sorted((o, vals[0]))) for (o, _), vals in k.items()}
        assert edges == set(g.edges())


def test_pipeline_disconnected_times_out():
    g = Graph(4, [(0, 1), (2, 3)])
    items = [[(("id", v),)] for v in range(4)]
    tr, know = pipeline_broadcast(items, g, NetworkConfig(round_limit=50))
    assert len(know[0]) < 4 or tr.status == "timeout"


@pytest.mark.parametrize("seed", range(5))
def test_convergecast(seed):
    g = random_connected_gnp(30, 0.15, seed)
    tree = bfs_tree(g, 0)
    _, total = convergecast_sum([1] * 30, tree, g, CFG)
    assert total == 30
    _, total = convergecast_sum([0] * 30, tree, g, CFG)
    assert total == 0
    rng = np.random.default_rng(seed)
    vals = [int(x) for x in rng.integers(0, 30 ** 3 + 1, size=30)]
    _, total = convergecast_wide(vals, tree, g, CFG, bound_bits=(30 ** 3).bit_length())
    assert total == sum(vals)


def test_convergecast_rejects_oversized_value():
    g = path_graph(4)
    with pytest.raises(ConfigError):
        convergecast_sum([1 << 40, 0, 0, 0], bfs_tree(g, 0), g, CFG)


def test_bfs_tree_depths_match_networkx():
    g = random_connected_gnp(40, 0.1, 3)
    tr, tree = distributed_bfs(g, 5, CFG)
    ref = nx.single_source_shortest_path_length(nx.Graph(g.edges()), 5)
    assert tree.depth[5] == 0 and tree.parent[5] == -1
    assert all(tree.depth[v] == ref[v] for v in range(40))
    assert tr.rounds_used <= max(ref.values()) + 1


@pytest.mark.parametrize("g,expected", [(path_graph(4), 3), (complete_graph(5), 1)])
def test_distributed_diameter_examples(g, expected):
    assert distributed_diameter(g, CFG)[0] == expected


@pytest.mark.parametrize("seed", range(5))
def test_distributed_diameter_matches_networkx(seed):
    g = random_connected_gnp(30, 0.2, seed)
    d, _, _ = distributed_diameter(g, CFG)
    assert d == nx.diameter(nx.Graph(g.edges())) == diameter(g)


def test_distributed_diameter_disconnected():
    assert distributed_diameter(Graph(4, [(0, 1), (2, 3)]), CFG)[0] == math.inf


def test_replay_is_byte_identical():
    g = random_connected_gnp(25, 0.2, 9)
    cfg = NetworkConfig(seed=42, trace=True)
    a = run(lambda v: Echo(), g, cfg).dumps()
    b = run(lambda v: Echo(), g, cfg).dumps()
    assert a == b


@pytest.mark.allow_violations
def test_broadcast_mode_blocks_distinct_messages():
    class Split(NodeProgram):
        def step(self, rnd, inbox):
            if rnd == 1:
                return {w: self.view.encode(("id", w)) for w in self.view.neighbors}
            return None
    tr = run(lambda v: Split(), star_graph(3), NetworkConfig(mode="broadcast"))
    assert tr.status == "violation"
