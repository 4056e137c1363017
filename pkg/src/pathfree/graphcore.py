"""Graph substrate and brute-force oracles.

Everything the distributed algorithms compute is checked against a function
in this module.  Graphs are immutable, nodes are ``0..n-1`` and adjacency is
kept both as sorted tuples (for iteration) and as Python-int bitmasks (for
the exponential searches).
"""

from __future__ import annotations

import gzip
import itertools
import math
import os
import time
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

INFINITE = math.inf
"""Marker returned by :func:`diameter` for disconnected graphs."""


class ParameterError(ValueError):
    """Raised when an operation is called outside its precondition."""


class EdgeListError(ValueError):
    """Malformed edge-list text.  ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class BudgetExceeded(RuntimeError):
    """An exponential search ran out of its time budget."""


def popcount(x: int) -> int:
    return x.bit_count()


def bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class Graph:
    """Immutable undirected simple graph on nodes ``0..node_count-1``.

    ``colors`` is either ``None`` or a tuple with one integer per node.
    """

    __slots__ = ("node_count", "adjacency", "colors", "_masks", "_sets", "_m")

    def __init__(self, node_count: int, edges: Iterable[tuple[int, int]] = (),
                 colors: Sequence[int] | None = None):
        if node_count < 0:
            raise ParameterError("node_count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(node_count)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ParameterError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ParameterError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self._init(node_count, tuple(tuple(sorted(s)) for s in nbrs), colors)

    def _init(self, n, adjacency, colors):
        object.__setattr__(self, "node_count", n)
        object.__setattr__(self, "adjacency", adjacency)
        if colors is not None:
            colors = tuple(int(c) for c in colors)
            if len(colors) != n:
                raise ParameterError("colors must cover every node")
        object.__setattr__(self, "colors", colors)
        masks = []
        for a in adjacency:
            m = 0
            for v in a:
                m |= 1 << v
            masks.append(m)
        object.__setattr__(self, "_masks", tuple(masks))
        object.__setattr__(self, "_sets", tuple(frozenset(a) for a in adjacency))
        object.__setattr__(self, "_m", sum(len(a) for a in adjacency) // 2)

    def __setattr__(self, key, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Iterable[int]],
                       colors: Sequence[int] | None = None) -> "Graph":
        edges = [(u, v) for u, a in enumerate(adjacency) for v in a if u < v]
        g = cls(len(adjacency), edges, colors)
        for u, a in enumerate(adjacency):
            if set(a) != g._sets[u]:
                raise ParameterError("adjacency is not symmetric")
        return g

    # -- queries -----------------------------------------------------------
    @property
    def edge_count(self) -> int:
        return self._m

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._sets[v]

    def mask(self, v: int) -> int:
        return self._masks[v]

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._sets[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, a in enumerate(self.adjacency) for v in a if u < v]

    def nodes(self) -> range:
        return range(self.node_count)

    # -- derived graphs ----------------------------------------------------
    def induced(self, nodes: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled ``nodes[i] -> i``."""
        index = {v: i for i, v in enumerate(nodes)}
        edges = [(index[u], index[v]) for u in nodes for v in self.adjacency[u]
                 if v in index and u < v]
        colors = None if self.colors is None else [self.colors[v] for v in nodes]
        return Graph(len(nodes), edges, colors)

    def with_colors(self, colors: Sequence[int] | None) -> "Graph":
        g = object.__new__(Graph)
        g._init(self.node_count, self.adjacency, colors)
        return g

    def without_edges(self, removed: Iterable[tuple[int, int]]) -> "Graph":
        drop = {(min(u, v), max(u, v)) for u, v in removed}
        return Graph(self.node_count, [e for e in self.edges() if e not in drop], self.colors)

    def with_edges(self, added: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.node_count, list(self.edges()) + list(added), self.colors)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Node ``v`` becomes ``perm[v]``."""
        colors = None
        if self.colors is not None:
            colors = [0] * self.node_count
            for v, c in enumerate(self.colors):
                colors[perm[v]] = c
        return Graph(self.node_count, [(perm[u], perm[v]) for u, v in self.edges()], colors)

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.node_count == other.node_count
                and self.adjacency == other.adjacency and self.colors == other.colors)

    def __hash__(self):
        return hash((self.node_count, self.adjacency, self.colors))

    def __repr__(self):
        return f"Graph(n={self.node_count}, m={self.edge_count})"


# ---------------------------------------------------------------------------
# small named graphs

def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    off = g.node_count
    return Graph(off + h.node_count, g.edges() + [(u + off, v + off) for u, v in h.edges()])


def join(g: Graph, h: Graph) -> Graph:
    off = g.node_count
    cross = [(u, off + v) for u in range(off) for v in range(h.node_count)]
    return Graph(off + h.node_count,
                 g.edges() + [(u + off, v + off) for u, v in h.edges()] + cross)


def add_universal_vertex(g: Graph) -> Graph:
    n = g.node_count
    return Graph(n + 1, g.edges() + [(v, n) for v in range(n)])


# ---------------------------------------------------------------------------
# distances

def bfs_distances(g: Graph, source: int) -> list[int]:
    """Hop distances from ``source``; unreachable nodes get -1."""
    dist = [-1] * g.node_count
    dist[source] = 0
    queue = deque([source])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = du
                queue.append(v)
    return dist


def is_connected(g: Graph) -> bool:
    if g.node_count == 0:
        return True
    return min(bfs_distances(g, 0)) >= 0


def diameter(g: Graph):
    """Largest eccentricity, or :data:`INFINITE` if ``g`` is disconnected."""
    best = 0
    for s in g.nodes():
        d = bfs_distances(g, s)
        if min(d) < 0:
            return INFINITE
        best = max(best, max(d))
    return best


# ---------------------------------------------------------------------------
# induced paths

@dataclass(frozen=True)
class PathSearch:
    """Outcome of a budgeted induced-path search.

    ``status`` is ``"found"``, ``"absent"`` or ``"budget"``.
    """
    status: str
    path: tuple[int, ...] | None = None
    elapsed: float = 0.0

    @property
    def found(self) -> bool:
        return self.status == "found"


def is_induced_path(g: Graph, seq: Sequence[int]) -> bool:
    """True iff ``seq`` lists distinct nodes forming an induced path in order."""
    if len(set(seq)) != len(seq):
        return False
    for i, u in enumerate(seq):
        for j in range(i + 1, len(seq)):
            if g.has_edge(u, seq[j]) != (j == i + 1):
                return False
    return True


def _component_size(masks, avail: int, x: int, need: int) -> int:
    seen = frontier = 1 << x
    count = 1
    while frontier and count <= need:
        nxt = 0
        for v in bits(frontier):
            nxt |= masks[v]
        nxt &= avail & ~seen
        seen |= nxt
        count += popcount(nxt)
        frontier = nxt
    return count


def _component_mask(masks, avail: int, x: int) -> int:
    seen = frontier = 1 << x
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= masks[v]
        nxt &= avail & ~seen
        seen |= nxt
        frontier = nxt
    return seen


_MEMO_CAP = 2_000_000


def _greedy_clique_cover(masks) -> list[int]:
    left = (1 << len(masks)) - 1
    out = []
    for v in sorted(range(len(masks)), key=lambda u: -masks[u].bit_count()):
        if not left >> v & 1:
            continue
        clique, pool = 1 << v, masks[v] & left
        while pool:
            u = max(bits(pool), key=lambda w: (masks[w] & pool).bit_count())
            clique |= 1 << u
            pool &= masks[u]
        left &= ~clique
        out.append(clique)
    return out


def find_induced_path(g: Graph, k: int, time_budget: float | None = None,
                      hints: Iterable[Sequence[int]] = ()) -> PathSearch:
    """Backtracking search for an induced path on ``k`` nodes.

    A partial path is only extended by neighbours of its last node that are
    non-adjacent to every earlier node.  Candidate witnesses in ``hints`` are
    checked before the search starts.  The rest of the search depends only on
    the last node, the component it can still reach and the remaining length,
    so failed states are remembered under that key.

    Two prunings: an induced path meets any clique in at most two nodes, so a
    fixed clique cover bounds what a component can still hold; and once every
    path starting at ``s`` has been tried, ``s`` is never used as a last node.
    """
    n = g.node_count
    if not 1 <= k <= max(n, 1) or n == 0:
        raise ParameterError(f"k={k} outside 1..{n}")
    start = time.perf_counter()
    for h in hints:
        if len(h) == k and is_induced_path(g, h):
            return PathSearch("found", tuple(h), time.perf_counter() - start)
    if k == 1:
        return PathSearch("found", (0,), 0.0)
    deadline = None if time_budget is None else start + time_budget
    masks = g.masks
    closed = [m | (1 << v) for v, m in enumerate(masks)]
    full = (1 << n) - 1
    path: list[int] = []
    ticks = [0]
    failed: set = set()
    cover = _greedy_clique_cover(masks)
    done_starts = 0

    def extend(x: int, blocked: int) -> bool:
        # blocked: closed neighbourhoods of all path nodes before x
        if len(path) == k:
            return True
        ticks[0] += 1
        if deadline is not None and ticks[0] & 255 == 0 and time.perf_counter() > deadline:
            raise BudgetExceeded
        need = k - len(path)
        key = None
        if need >= 3:
            comp = _component_mask(masks, full & ~blocked, x)
            if comp.bit_count() <= need:
                return False
            key = (x, comp, need)
            if key in failed:
                return False
            room = 0
            for c in cover:
                room += min(2, (c & comp).bit_count())
            if room <= need:
                failed.add(key)
                return False
        cand = masks[x] & ~blocked
        if need == 1:
            cand &= ~done_starts
        nb = blocked | closed[x]
        for y in bits(cand):
            path.append(y)
            if extend(y, nb):
                return True
            path.pop()
        if key is not None and len(failed) < _MEMO_CAP:
            failed.add(key)
        return False

    try:
        for s in range(n):
            path[:] = [s]
            if extend(s, 0):
                return PathSearch("found", tuple(path), time.perf_counter() - start)
            done_starts |= 1 << s
    except BudgetExceeded:
        return PathSearch("budget", None, time.perf_counter() - start)
    return PathSearch("absent", None, time.perf_counter() - start)


def induced_path_exists(g: Graph, k: int, time_budget: float | None = None) -> bool:
    """True iff ``g`` has an induced path on ``k`` nodes.

    Raises :class:`BudgetExceeded` when ``time_budget`` seconds run out.
    """
    if not 1 <= k <= g.node_count:
        raise ParameterError(f"k={k} outside 1..{g.node_count}")
    res = find_induced_path(g, k, time_budget)
    if res.status == "budget":
        raise BudgetExceeded(f"induced P{k} search exceeded {time_budget}s")
    return res.found


def _has_hamiltonian_path(n: int, masks: Sequence[int]) -> bool:
    # Held-Karp style reachability over subsets
    if n <= 1:
        return True
    full = (1 << n) - 1
    reach = [0] * (1 << n)  # reach[S] = set of end nodes of paths covering S
    for v in range(n):
        reach[1 << v] = 1 << v
    for s in range(1, full + 1):
        ends = reach[s]
        if not ends:
            continue
        for v in bits(ends):
            nxt = masks[v] & ~s
            for w in bits(nxt):
                reach[s | (1 << w)] |= 1 << w
    return reach[full] != 0


def induced_path_exists_by_subsets(g: Graph, k: int) -> bool:
    """Second oracle: some k-subset has k-1 edges and a Hamiltonian path."""
    if not 1 <= k <= g.node_count:
        raise ParameterError(f"k={k} outside 1..{g.node_count}")
    for sub in itertools.combinations(range(g.node_count), k):
        pos = {v: i for i, v in enumerate(sub)}
        local = []
        edges = 0
        for v in sub:
            m = 0
            for w in g.adjacency[v]:
                if w in pos:
                    m |= 1 << pos[w]
            local.append(m)
            edges += popcount(m)
        if edges // 2 == k - 1 and _has_hamiltonian_path(k, local):
            return True
    return False


def iter_induced_paths(g: Graph, k: int, edge_filter=None) -> Iterator[tuple[int, ...]]:
    """Every induced path on k nodes, each reported once (first end < last end)."""
    masks = g.masks
    closed = [m | (1 << v) for v, m in enumerate(masks)]
    path: list[int] = []

    def extend(x, blocked):
        if len(path) == k:
            if path[0] < path[-1] or k == 1:
                yield tuple(path)
            return
        nb = blocked | closed[x]
        for y in bits(masks[x] & ~blocked):
            path.append(y)
            yield from extend(y, nb)
            path.pop()

    for s in range(g.node_count):
        path[:] = [s]
        yield from extend(s, 0)


def count_induced_paths(g: Graph, k: int) -> int:
    return sum(1 for _ in iter_induced_paths(g, k))


def ordered_induced_path_exists(g: Graph, k: int) -> bool:
    """Induced path p_1..p_k with color(p_i) = i."""
    if g.colors is None:
        raise ParameterError("ordered path detection needs a coloring")
    if any(not 1 <= c <= k for c in g.colors):
        raise ParameterError(f"colors must lie in 1..{k}")
    colors = g.colors
    masks = g.masks
    by_color = [0] * (k + 2)
    for v, c in enumerate(colors):
        by_color[c] |= 1 << v
    closed = [m | (1 << v) for v, m in enumerate(masks)]

    def extend(x, depth, blocked):
        if depth == k:
            return True
        cand = masks[x] & ~blocked & by_color[depth + 1]
        nb = blocked | closed[x]
        return any(extend(y, depth + 1, nb) for y in bits(cand))

    return any(extend(s, 1, 0) for s in bits(by_color[1]))


def induced_c4_exists(g: Graph) -> bool:
    """Exhaustive check for four nodes inducing a 4-cycle."""
    adj = g._sets
    for a, c in itertools.combinations(range(g.node_count), 2):
        if c in adj[a]:
            continue
        common = sorted(adj[a] & adj[c])
        for b, d in itertools.combinations(common, 2):
            if d not in adj[b]:
                return True
    return False


# ---------------------------------------------------------------------------
# five-node patterns

_PAIRS5 = tuple(itertools.combinations(range(5), 2))
_PAIR_INDEX5 = {p: i for i, p in enumerate(_PAIRS5)}


def pattern_mask(edges: Iterable[tuple[int, int]]) -> int:
    """10-bit adjacency mask of a graph on nodes 0..4."""
    m = 0
    for u, v in edges:
        m |= 1 << _PAIR_INDEX5[(min(u, v), max(u, v))]
    return m


def mask_edges(mask: int) -> list[tuple[int, int]]:
    return [p for i, p in enumerate(_PAIRS5) if mask >> i & 1]


@lru_cache(maxsize=None)
def _perm_tables():
    tables = []
    for perm in itertools.permutations(range(5)):
        tables.append([_PAIR_INDEX5[(min(perm[u], perm[v]), max(perm[u], perm[v]))]
                       for u, v in _PAIRS5])
    return tables


@lru_cache(maxsize=None)
def _canon_table() -> tuple[int, ...]:
    out = []
    tables = _perm_tables()
    for mask in range(1 << 10):
        set_bits = [i for i in range(10) if mask >> i & 1]
        best = min(sum(1 << t[i] for i in set_bits) for t in tables)
        out.append(best)
    return tuple(out)


def canonical_pattern(mask: int) -> int:
    """Minimum adjacency bitmask over all 120 relabellings."""
    return _canon_table()[mask]


def subset_mask(g: Graph, nodes: Sequence[int]) -> int:
    m = 0
    for i, p in enumerate(_PAIRS5):
        if g.has_edge(nodes[p[0]], nodes[p[1]]):
            m |= 1 << i
    return m


@dataclass(frozen=True)
class PatternCatalog:
    """Canonical masks of five-node patterns; ``patterns[0]`` is the five-cycle."""
    patterns: tuple[int, ...]

    def __len__(self):
        return len(self.patterns)

    def __contains__(self, mask: int) -> bool:
        return canonical_pattern(mask) in self.patterns

    def index_of(self, mask: int) -> int:
        """1-based index of the pattern isomorphic to ``mask`` (0 if none)."""
        c = canonical_pattern(mask)
        try:
            return self.patterns.index(c) + 1
        except ValueError:
            return 0


def _traceable5(mask: int) -> bool:
    adj = [0] * 5
    for u, v in mask_edges(mask):
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return _has_hamiltonian_path(5, adj)


C5_MASK = canonical_pattern(pattern_mask([(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]))
P5_MASK = canonical_pattern(pattern_mask([(0, 1), (1, 2), (2, 3), (3, 4)]))


@lru_cache(maxsize=None)
def enumerate_pattern_catalog() -> PatternCatalog:
    """Non-isomorphic 5-node graphs with a spanning path, other than the path itself.

    The bare path is left out because a copy of it can never turn into a
    path by losing edges.
    """
    classes = sorted(set(_canon_table()))
    keep = [c for c in classes if c != P5_MASK and _traceable5(c)]
    keep.sort(key=lambda c: (c != C5_MASK, popcount(c), c))
    return PatternCatalog(tuple(keep))


def pattern_graph(mask: int) -> Graph:
    return Graph(5, mask_edges(mask))


def count_induced_copies(g: Graph, h) -> int:
    """Number of 5-subsets of ``g`` inducing a graph isomorphic to ``h``.

    ``h`` is either a 5-node :class:`Graph` or a 10-bit pattern mask.
    """
    if isinstance(h, Graph):
        if h.node_count != 5:
            raise ParameterError("pattern must have 5 nodes")
        h = pattern_mask(h.edges())
    target = canonical_pattern(h)
    table = _canon_table()
    count = 0
    for sub in itertools.combinations(range(g.node_count), 5):
        if table[subset_mask(g, sub)] == target:
            count += 1
    return count


# ---------------------------------------------------------------------------
# canonical labelling for small graphs (corpus enumeration)

def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    masks = g.masks
    changed = True
    while changed:
        changed = False
        cell_masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            cell_masks.append(m)
        out = []
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            sig = {}
            for v in c:
                key = tuple(popcount(masks[v] & cm) for cm in cell_masks)
                sig.setdefault(key, []).append(v)
            if len(sig) > 1:
                changed = True
                for key in sorted(sig):
                    out.append(sig[key])
            else:
                out.append(c)
        cells = out
    return cells


def canonical_form(g: Graph) -> tuple[int, int]:
    """Canonical certificate ``(n, adjacency bits)`` via individualisation-refinement."""
    n = g.node_count
    pairs = list(itertools.combinations(range(n), 2))
    best = [None]

    def leaf_code(order):
        code = 0
        for idx, (i, j) in enumerate(pairs):
            if g.has_edge(order[i], order[j]):
                code |= 1 << idx
        return code

    def search(cells):
        cells = _refine(g, cells)
        if all(len(c) == 1 for c in cells):
            code = leaf_code([c[0] for c in cells])
            if best[0] is None or code > best[0]:
                best[0] = code
            return
        target = min((i for i, c in enumerate(cells) if len(c) > 1),
                     key=lambda i: (len(cells[i]), i))
        for v in cells[target]:
            rest = [w for w in cells[target] if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    if n == 0:
        return (0, 0)
    search([list(range(n))])
    return (n, best[0])


def _augment(graphs: list[Graph]) -> list[Graph]:
    seen = {}
    for g in graphs:
        n = g.node_count
        for sub in range(1 << n):
            h = Graph(n + 1, g.edges() + [(v, n) for v in bits(sub)])
            key = canonical_form(h)
            if key not in seen:
                seen[key] = h
    return [seen[k] for k in sorted(seen)]


def _encode(g: Graph) -> str:
    code = 0
    for idx, (i, j) in enumerate(itertools.combinations(range(g.node_count), 2)):
        if g.has_edge(i, j):
            code |= 1 << idx
    return f"{g.node_count}:{code:x}"


def _decode(s: str) -> Graph:
    n, code = s.split(":")
    n, code = int(n), int(code, 16)
    pairs = itertools.combinations(range(n), 2)
    return Graph(n, [p for idx, p in enumerate(pairs) if code >> idx & 1])


_DATA = os.path.join(os.path.dirname(__file__), "data", "graphs_upto8.txt.gz")


def generate_all_graphs(max_n: int) -> dict[int, list[Graph]]:
    """All graphs on 1..max_n nodes up to isomorphism, by vertex augmentation."""
    levels = {1: [Graph(1)]}
    for n in range(2, max_n + 1):
        levels[n] = _augment(levels[n - 1])
    return levels


@lru_cache(maxsize=None)
def _load_all_graphs() -> dict[int, tuple[Graph, ...]]:
    if not os.path.exists(_DATA):
        levels = generate_all_graphs(8)
        with gzip.open(_DATA, "wt") as fh:
            for n in sorted(levels):
                for g in levels[n]:
                    fh.write(_encode(g) + "\n")
    out: dict[int, list[Graph]] = {}
    with gzip.open(_DATA, "rt") as fh:
        for line in fh:
            g = _decode(line.strip())
            out.setdefault(g.node_count, []).append(g)
    return {n: tuple(gs) for n, gs in out.items()}


def all_graphs(n: int) -> tuple[Graph, ...]:
    """Every graph on ``n`` nodes (1 <= n <= 8), one per isomorphism class."""
    if not 1 <= n <= 8:
        raise ParameterError("exhaustive corpus covers 1..8 nodes")
    return _load_all_graphs()[n]


def connected_graphs(max_n: int = 8, min_n: int = 1) -> list[Graph]:
    return [g for n in range(min_n, max_n + 1) for g in all_graphs(n) if is_connected(g)]


# ---------------------------------------------------------------------------
# generators

def random_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p); identical graphs for identical seeds."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.shape[0]) < p
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def random_connected_gnp(n: int, p: float, seed: int, max_tries: int = 1000) -> Graph:
    """First connected sample of G(n, p) along a seed sequence derived from ``seed``."""
    ss = np.random.SeedSequence(seed)
    for child in ss.spawn(max_tries):
        g = random_gnp(n, p, int(child.generate_state(1)[0]))
        if is_connected(g):
            return g
    raise ParameterError(f"no connected G({n},{p}) sample in {max_tries} tries")


def random_cograph(n: int, seed: int, join_prob: float = 0.5,
                   top_small_side: int | None = None,
                   dense_below: int | None = None) -> Graph:
    """Connected cograph from the single-node / union / join grammar.

    The top operation is a join so the result is connected.  ``top_small_side``
    fixes the size of the smaller side of that join; by default it is uniform.
    With ``dense_below`` set, inner joins only happen on parts smaller than
    that size, which keeps large instances sparse.
    """
    rng = np.random.default_rng(seed)
    if n == 1:
        return Graph(1)

    def build(nodes: list[int], edges: list, force_join: bool = False, small=None):
        if len(nodes) == 1:
            return
        if small is None:
            small = int(rng.integers(1, len(nodes) // 2 + 1))
        perm = rng.permutation(len(nodes))
        side_a = [nodes[i] for i in perm[:small]]
        side_b = [nodes[i] for i in perm[small:]]
        allowed = dense_below is None or len(nodes) < dense_below
        if force_join or (allowed and rng.random() < join_prob):
            edges.extend((u, v) for u in side_a for v in side_b)
        build(side_a, edges)
        build(side_b, edges)

    edges: list = []
    small = None if top_small_side is None else max(1, min(top_small_side, n // 2))
    build(list(range(n)), edges, force_join=True, small=small)
    return Graph(n, edges)


def random_p5_free(n: int, seed: int, p: float = 0.5, max_tries: int = 200) -> Graph:
    """Connected P5-free graph grown node by node.

    Each new node draws a random non-empty neighbourhood among the existing
    nodes; draws that create an induced P5 are redrawn.  A node adjacent to
    everything never creates one, so that is the fallback.
    """
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, int]] = []
    for v in range(1, n):
        chosen = list(range(v))
        for _ in range(max_tries):
            nb = [u for u in range(v) if rng.random() < p]
            if nb and not _p5_through(Graph(v + 1, edges + [(u, v) for u in nb]), v):
                chosen = nb
                break
        edges.extend((u, v) for u in chosen)
    return Graph(n, edges)


def _p5_through(g: Graph, v: int) -> bool:
    """Is there an induced P5 containing ``v``?"""
    masks = g.masks
    closed = [m | (1 << w) for w, m in enumerate(masks)]

    def extend(x, blocked, length, has_v):
        if length == 5:
            return has_v
        nb = blocked | closed[x]
        return any(extend(y, nb, length + 1, has_v or y == v)
                   for y in bits(masks[x] & ~blocked))

    return any(extend(s, 0, 1, s == v) for s in range(g.node_count))


# ---------------------------------------------------------------------------
# edge-list I/O

def dumps_edge_list(g: Graph) -> str:
    lines = [f"{g.node_count} {g.edge_count}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    if g.colors is not None:
        lines += [f"c {v} {c}" for v, c in enumerate(g.colors)]
    return "\n".join(lines) + "\n"


def loads_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` then ``m`` lines ``"u v"`` and optional ``"c u color"`` lines."""
    rows = [(i + 1, ln.split()) for i, ln in enumerate(text.splitlines())]
    rows = [(i, toks) for i, toks in rows if toks and not toks[0].startswith("#")]
    if not rows:
        raise EdgeListError(1, "empty input")
    line, head = rows[0]
    if len(head) != 2:
        raise EdgeListError(line, "header must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise EdgeListError(line, "header must hold two integers") from None
    if n < 1 or m < 0:
        raise EdgeListError(line, "need n >= 1 and m >= 0")
    edges = []
    colors: dict[int, int] = {}
    seen = set()
    for line, toks in rows[1:]:
        if toks[0] == "c":
            if len(toks) != 3:
                raise EdgeListError(line, "color line must be 'c u color'")
            try:
                u, c = int(toks[1]), int(toks[2])
            except ValueError:
                raise EdgeListError(line, "color line must hold integers") from None
            if not 0 <= u < n:
                raise EdgeListError(line, f"node {u} out of range")
            colors[u] = c
            continue
        if len(toks) != 2:
            raise EdgeListError(line, "edge line must be 'u v'")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise EdgeListError(line, "edge endpoints must be integers") from None
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListError(line, f"edge ({u}, {v}) out of range")
        if u == v:
            raise EdgeListError(line, f"self-loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListError(line, f"duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    if len(edges) != m:
        raise EdgeListError(rows[-1][0], f"header announced {m} edges, found {len(edges)}")
    if colors and len(colors) != n:
        missing = min(set(range(n)) - set(colors))
        raise EdgeListError(rows[-1][0], f"node {missing} has no color")
    return Graph(n, edges, [colors[v] for v in range(n)] if colors else None)


def save_edge_list(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_edge_list(g))


def load_edge_list(path) -> Graph:
    with open(path) as fh:
        return loads_edge_list(fh.read())
