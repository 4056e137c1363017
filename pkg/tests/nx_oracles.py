"""Brute-force predicates built on networkx, kept apart from the package's own search."""
import itertools

import networkx as nx

from pathfree.graphcore import Graph


def to_nx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(g.nodes())
    G.add_edges_from(g.edges())
    return G


def has_induced_path(g: Graph, k: int) -> bool:
    G = to_nx(g)
    for sub in itertools.combinations(G.nodes, k):
        H = G.subgraph(sub)
        if H.number_of_edges() == k - 1 and nx.is_connected(H) and max(d for _, d in H.degree()) <= 2:
            return True
    return False


def has_induced_c4(g: Graph) -> bool:
    G = to_nx(g)
    C4 = nx.cycle_graph(4)
    return any(nx.is_isomorphic(G.subgraph(s), C4) for s in itertools.combinations(G.nodes, 4))


def has_ordered_path(g: Graph, k: int) -> bool:
    """Induced path whose i-th node has color i, one node per color class."""
    G = to_nx(g)
    classes = [[v for v in g.nodes() if g.colors[v] == c] for c in range(1, k + 1)]
    for pick in itertools.product(*classes):
        if all(G.has_edge(pick[i], pick[j]) == (j == i + 1)
               for i in range(k) for j in range(i + 1, k)):
            return True
    return False
