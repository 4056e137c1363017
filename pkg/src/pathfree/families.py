"""Seeded instance generators used by the benchmarks and the acceptance suite."""
from __future__ import annotations

from math import isqrt

import numpy as np

from .graphcore import (Graph, connected_graphs, diameter, induced_path_exists,
                        is_connected, random_cograph, random_gnp)


def p4_scaling_cograph(n: int, seed: int) -> Graph:
    """Connected cograph whose top join has a small side of about sqrt(n) nodes.

    Inner joins only happen on parts with fewer than 32 nodes, so the edge count
    stays near-linear and the instances remain cheap to simulate at n = 4096.
    """
    return random_cograph(n, seed, top_small_side=max(1, isqrt(n)), dense_below=32)


def hub_graph(n: int, seed: int, avg_degree: float = 4.0) -> Graph:
    """Sparse random graph on n-1 nodes plus one node adjacent to all of them (diameter <= 2)."""
    if n < 2:
        return Graph(n)
    base = random_gnp(n - 1, min(1.0, avg_degree / max(1, n - 1)), seed)
    edges = [(a + 1, b + 1) for a, b in base.edges()] + [(0, v) for v in range(1, n)]
    return Graph(n, edges)


def two_hub_graph(n: int, seed: int, avg_degree: float = 3.0) -> Graph:
    """Two adjacent hubs splitting the other nodes, with sparse edges inside each half.

    Cross-half pairs sit at distance 3 unless a random edge shortcuts them; the
    generator keeps cross-half edges out, so the diameter is exactly 3 for n >= 6.
    """
    rng = np.random.default_rng(seed)
    rest = list(range(2, n))
    perm = [rest[i] for i in rng.permutation(len(rest))]
    half_a, half_b = perm[: len(perm) // 2], perm[len(perm) // 2:]
    edges = [(0, 1)] + [(0, v) for v in half_a] + [(1, v) for v in half_b]
    for half in (half_a, half_b):
        k = len(half)
        if k < 2:
            continue
        p = min(1.0, avg_degree / (k - 1))
        for i in range(k):
            for j in range(i + 1, k):
                if rng.random() < p:
                    edges.append((half[i], half[j]))
    return Graph(n, edges)


_BASES: list[Graph] | None = None


def _diameter3_bases() -> list[Graph]:
    """P5-free connected graphs on 4..6 nodes with diameter exactly 3."""
    global _BASES
    if _BASES is None:
        _BASES = [g for g in connected_graphs(6, 4)
                  if diameter(g) == 3 and not (g.node_count >= 5 and induced_path_exists(g, 5))]
    return _BASES


def module_blowup(seed: int, flips: int = 0, max_module: int = 4) -> Graph:
    """Substitute a random cograph for every node of a small P5-free diameter-3 base.

    Substitution keeps the graph P5-free and produces many twin pairs, which is
    what fills the bad-edge and far-layer sets.  ``flips`` toggles that many
    random node pairs afterwards to break P5-freeness on purpose.  Node ids are
    shuffled.
    """
    rng = np.random.default_rng(seed)
    bases = _diameter3_bases()
    base = bases[int(rng.integers(len(bases)))]
    modules: list[list[int]] = []
    edges: list[tuple[int, int]] = []
    nxt = 0
    for _ in range(base.node_count):
        k = int(rng.integers(1, max_module + 1))
        ids = list(range(nxt, nxt + k))
        nxt += k
        modules.append(ids)
        if k > 1:
            inner = random_cograph(k, int(rng.integers(1 << 30)))
            edges += [(ids[a], ids[b]) for a, b in inner.edges()]
    for a, b in base.edges():
        edges += [(x, y) for x in modules[a] for y in modules[b]]
    perm = rng.permutation(nxt)
    es = {tuple(sorted((int(perm[a]), int(perm[b])))) for a, b in edges}
    for _ in range(flips):
        a, b = sorted(int(x) for x in rng.choice(nxt, 2, replace=False))
        es ^= {(a, b)}
    return Graph(nxt, sorted(es))


def diameter3_instances(count: int, seed: int = 0, max_flips: int = 2):
    """Yield ``count`` connected diameter-3 graphs from module blow-ups.

    Flip counts cycle through 0..max_flips so both P5-free and non-free inputs appear.
    """
    made, k = 0, 0
    while made < count:
        g = module_blowup(seed * 1_000_003 + k, flips=k % (max_flips + 1))
        k += 1
        if is_connected(g) and diameter(g) == 3:
            made += 1
            yield g
