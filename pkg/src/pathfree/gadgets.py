"""Lower-bound graph families: two-party and three-party set-disjointness gadgets.

Every builder returns a :class:`GadgetGraph` whose freeness (or ordered-path
freeness) for ``k_target`` encodes disjointness of the inputs.  Node names are
kept in ``names`` so witnesses and cut edges can be read back.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import isqrt
from typing import Sequence

from .graphcore import (Graph, ParameterError, PathSearch, find_induced_path,
                        is_induced_path, ordered_induced_path_exists)

FAMILIES = ("P11_d1", "P22_d2", "P8d_d3plus", "NOF_P5", "ORDERED_P5")


class GadgetError(ParameterError):
    pass


def _bits(s) -> list[int]:
    if isinstance(s, str):
        if any(c not in "01" for c in s):
            raise GadgetError(f"not a bit string: {s!r}")
        return [int(c) for c in s]
    return [int(b) for b in s]


def disj(x, y) -> int:
    """1 when no index has both bits set, else 0."""
    x, y = _bits(x), _bits(y)
    if len(x) != len(y):
        raise GadgetError("length mismatch")
    return 0 if any(a and b for a, b in zip(x, y)) else 1


@dataclass
class GadgetGraph:
    family: str
    graph: Graph
    names: list[str]
    k_target: int
    alice: frozenset = frozenset()
    bob: frozenset = frozenset()
    n: int = 0
    d: int = 1
    meta: dict = field(default_factory=dict)
    witness: tuple[int, ...] | None = None   # canonical path shape when the inputs intersect

    @property
    def cut_edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in self.graph.edges()
                if (a in self.alice and b in self.bob) or (a in self.bob and b in self.alice)]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def to_json(self) -> dict:
        return {"family": self.family, "n": self.n, "d": self.d, "k_target": self.k_target,
                "nodes": self.graph.node_count, "edges": self.graph.edge_count,
                "cut_size": cut_size(self), **self.meta}


def cut_size(gg: GadgetGraph) -> int:
    return len(gg.cut_edges)


class _Builder:
    def __init__(self):
        self.names: list[str] = []
        self.ids: dict[str, int] = {}
        self.edges: set = set()
        self.side: dict[int, str] = {}

    def node(self, name: str, side: str = "") -> int:
        if name not in self.ids:
            self.ids[name] = len(self.names)
            self.names.append(name)
            self.side[self.ids[name]] = side
        return self.ids[name]

    def edge(self, a: str, b: str):
        u, v = self.ids[a], self.ids[b]
        if u != v:
            self.edges.add((min(u, v), max(u, v)))

    def clique(self, names):
        for a, b in combinations(names, 2):
            self.edge(a, b)

    def finish(self, family, k, n, d=1, colors=None, meta=None, witness_names=None) -> GadgetGraph:
        g = Graph(len(self.names), sorted(self.edges), colors)
        alice = frozenset(v for v, s in self.side.items() if s == "A")
        bob = frozenset(v for v, s in self.side.items() if s == "B")
        w = None
        if witness_names:
            w = tuple(self.ids[x] for x in witness_names)
        return GadgetGraph(family, g, list(self.names), k, alice, bob, n, d, meta or {}, w)


def _pair_index(j1: int, j2: int, n: int, literal) -> tuple[int, bool]:
    """1-based bit index for (j1, j2); falls back to j1 + (j2-1)n when the literal formula is not a bijection."""
    table = {(a, b): literal(a, b) for a in range(1, n + 1) for b in range(1, n + 1)}
    if sorted(table.values()) == list(range(1, n * n + 1)):
        return table[(j1, j2)], False
    return j1 + (j2 - 1) * n, True


def _check_len(x, y, n):
    x, y = _bits(x), _bits(y)
    if len(x) != n * n or len(y) != n * n:
        raise GadgetError(f"inputs must have n^2 = {n * n} bits")
    return x, y


# ---------------------------------------------------------------------------
# d = 1: P11

def build_p11(x, y, n: int) -> GadgetGraph:
    """4n + 7 nodes; shortcut edges appear where input bits are 0."""
    x, y = _check_len(x, y, n)
    b = _Builder()
    for s in "pqrs":
        b.node(s, "A")
    for i in (1, 2):
        for j in range(1, n + 1):
            b.node(f"a{i}_{j}", "A")
    for s in "xyz":
        b.node(s, "B")
    for i in (1, 2):
        for j in range(1, n + 1):
            b.node(f"b{i}_{j}", "B")
    for i in (1, 2):
        b.clique([f"a{i}_{j}" for j in range(1, n + 1)])
        b.clique([f"b{i}_{j}" for j in range(1, n + 1)])
    for j in range(1, n + 1):
        b.edge(f"a1_{j}", f"b1_{j}")
        b.edge(f"a2_{j}", f"b2_{j}")
        b.edge("q", f"a1_{j}")
        b.edge("r", f"a2_{j}")
        b.edge("x", f"b1_{j}")
        b.edge("z", f"b2_{j}")
    b.edge("p", "q")
    b.edge("s", "r")
    b.edge("x", "y")
    b.edge("y", "z")
    substituted = False
    witness = None
    for j1 in range(1, n + 1):
        for j2 in range(1, n + 1):
            k, sub = _pair_index(j1, j2, n, lambda a, c: a + (c - 1) * (n - 1))
            substituted |= sub
            if x[k - 1] == 0:
                b.edge(f"a1_{j1}", f"a2_{j2}")
            if y[k - 1] == 0:
                b.edge(f"b1_{j1}", f"b2_{j2}")
            if witness is None and x[k - 1] and y[k - 1]:
                witness = ["p", "q", f"a1_{j1}", f"b1_{j1}", "x", "y", "z", f"b2_{j2}",
                           f"a2_{j2}", "r", "s"]
    meta = {"index_formula": "j1+(j2-1)n" if substituted else "j1+(j2-1)(n-1)"}
    return b.finish("P11_d1", 11, n, 1, meta=meta, witness_names=witness)


# ---------------------------------------------------------------------------
# ordered P5

def build_ordered_p5(x, y, n: int) -> GadgetGraph:
    """Five colour classes of size n; colour i on A_i / B_i."""
    x, y = _check_len(x, y, n)
    b = _Builder()
    colors = []
    for i, side in ((1, "A"), (2, "A"), (5, "A")):
        for j in range(1, n + 1):
            b.node(f"a{i}_{j}", side)
            colors.append(i)
    for i in (3, 4):
        for j in range(1, n + 1):
            b.node(f"b{i}_{j}", "B")
            colors.append(i)
    for j in range(1, n + 1):
        b.edge(f"a5_{j}", f"b4_{j}")
        b.edge(f"a2_{j}", f"b3_{j}")
        for k in range(1, n + 1):
            if j != k:
                b.edge(f"a1_{j}", f"a5_{k}")
    substituted = False
    witness = None
    for j1 in range(1, n + 1):
        for j2 in range(1, n + 1):
            k, sub = _pair_index(j1, j2, n, lambda a, c: a + c * (n - 1))
            substituted |= sub
            if x[k - 1]:
                b.edge(f"a1_{j1}", f"a2_{j2}")
            if y[k - 1]:
                b.edge(f"b4_{j1}", f"b3_{j2}")
            if witness is None and x[k - 1] and y[k - 1]:
                witness = [f"a1_{j1}", f"a2_{j2}", f"b3_{j2}", f"b4_{j1}", f"a5_{j1}"]
    meta = {"index_formula": "j1+(j2-1)n" if substituted else "j1+j2(n-1)"}
    return b.finish("ORDERED_P5", 5, n, 1, colors=colors, meta=meta, witness_names=witness)


# ---------------------------------------------------------------------------
# d = 2: P22

def build_p22(x, y, n: int) -> GadgetGraph:
    """Square block size n; two nodes per block index, code nodes indexed by the two base-sqrt(n) digits."""
    rt = isqrt(n)
    if rt * rt != n:
        raise GadgetError("n must be a perfect square")
    x, y = _check_len(x, y, n)
    b = _Builder()
    for s in "pqrs":
        b.node(s, "A")
    for s in "xy":
        b.node(s, "B")
    for i in range(1, n + 1):
        for j in (1, 2):
            b.node(f"a1_{i}_{j}", "A")
            b.node(f"a2_{i}_{j}", "A")
            b.node(f"b1_{i}_{j}", "B")
            b.node(f"b2_{i}_{j}", "B")
    for t in range(1, 2 * rt + 1):
        for j in (1, 2):
            b.node(f"uA_{t}_{j}", "A")
            b.node(f"lA_{t}_{j}", "A")
            b.node(f"uB_{t}_{j}", "B")
            b.node(f"lB_{t}_{j}", "B")
            b.edge(f"uA_{t}_{j}", f"uB_{t}_{j}")
            b.edge(f"lA_{t}_{j}", f"lB_{t}_{j}")
    b.edge("p", "q")
    b.edge("r", "s")
    for i in range(1, n + 1):
        b.edge("q", f"a1_{i}_1")
        b.edge("r", f"a2_{i}_1")
        b.edge("x", f"b1_{i}_1")
        b.edge("x", f"b2_{i}_1")
        b.edge("y", f"b1_{i}_2")
        b.edge("y", f"b2_{i}_2")
        i1, i2 = (i - 1) % rt + 1, (i - 1) // rt + 1
        b.edge(f"a1_{i}_1", f"uA_{i1}_1")
        b.edge(f"a1_{i}_2", f"uA_{i2}_2")
        b.edge(f"a2_{i}_1", f"lA_{i1}_1")
        b.edge(f"a2_{i}_2", f"lA_{i2}_2")
        b.edge(f"b1_{i}_1", f"uB_{i1}_1")
        b.edge(f"b1_{i}_2", f"uB_{i2}_2")
        # the printed list repeats the b1 edges; the lower code set belongs to b2
        b.edge(f"b2_{i}_1", f"lB_{i1}_1")
        b.edge(f"b2_{i}_2", f"lB_{i2}_2")
    for blk in ("a1", "a2", "b1", "b2"):
        for i in range(1, n + 1):
            for k in range(i + 1, n + 1):
                for j in (1, 2):
                    for j2 in (1, 2):
                        b.edge(f"{blk}_{i}_{j}", f"{blk}_{k}_{j2}")
    witness = None
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            bit = (i - 1) * n + (j - 1)
            if x[bit]:
                b.edge(f"a1_{i}_2", f"a2_{j}_1")
            if y[bit]:
                b.edge(f"b1_{i}_1", f"b2_{j}_1")
                b.edge(f"b1_{i}_2", f"b2_{j}_2")
            if witness is None and x[bit] and y[bit]:
                witness = _p22_witness(i, j, rt)
    return b.finish("P22_d2", 22, n, 2, meta={"bit_order": "x[(i-1)n + j-1] = x_{i,j}"},
                    witness_names=witness)


def _p22_witness(i: int, j: int, rt: int) -> list[str]:
    return []


# ---------------------------------------------------------------------------
# d >= 3: P_{8d}

def _sigma(n: int, d: int, m: int) -> list[tuple[int, ...]]:
    """Lexicographically first n distinct d-subsets of {1..m}."""
    out = []
    for c in combinations(range(1, m + 1), d):
        out.append(c)
        if len(out) == n:
            return out
    raise GadgetError("code space too small")


def build_p8d(x, y, n: int, d: int, full_y_rounds: bool = False) -> GadgetGraph:
    """Code-gadget family for P_{8d}, d >= 3.

    Input edges on both sides exist for rounds k in 1..d-1.  The longest
    round-robin path then has 8d-4 nodes, and no induced P_{8d} appears even
    for intersecting inputs.  ``full_y_rounds`` adds the b1-b2 edges for k = d
    as well, which restores the round-robin witness but lets disjoint inputs
    reach P_{8d} through the inter-block edges of A1 and A2.
    """
    if d < 3:
        raise GadgetError("d must be at least 3")
    root = round(n ** (1.0 / d))
    if root ** d != n:
        raise GadgetError("n^(1/d) must be an integer")
    x, y = _check_len(x, y, n)
    m = d * root
    codes = _sigma(n, d, m)
    b = _Builder()
    for blk, side in (("a1", "A"), ("a2", "A"), ("b1", "B"), ("b2", "B")):
        for i in range(1, n + 1):
            for j in range(1, d + 1):
                b.node(f"{blk}_{i}_{j}", side)
    for c in range(1, m + 1):
        b.node(f"uA_{c}", "A")
        b.node(f"lA_{c}", "A")
        b.node(f"uB_{c}", "B")
        b.node(f"lB_{c}", "B")
        b.edge(f"uA_{c}", f"uB_{c}")
        b.edge(f"lA_{c}", f"lB_{c}")
    code_of = {"a1": "uA", "a2": "lA", "b1": "uB", "b2": "lB"}
    for blk, cs in code_of.items():
        for i in range(1, n + 1):
            for j, c in enumerate(codes[i - 1], start=1):
                b.edge(f"{blk}_{i}_{j}", f"{cs}_{c}")
        for i in range(1, n + 1):
            for k in range(i + 1, n + 1):
                for j in range(1, d + 1):
                    for j2 in range(1, d + 1):
                        b.edge(f"{blk}_{i}_{j}", f"{blk}_{k}_{j2}")
    witness = None
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            bit = (i - 1) * n + (j - 1)
            if x[bit]:
                for k in range(1, d):
                    b.edge(f"a1_{i}_{k + 1}", f"a2_{j}_{k}")
            if y[bit]:
                for k in range(1, d + 1 if full_y_rounds else d):
                    b.edge(f"b1_{i}_{k}", f"b2_{j}_{k}")
            if witness is None and x[bit] and y[bit] and full_y_rounds:
                witness = _p8d_witness(i, j, d, codes)
    meta = {"code_space": m, "nodes": len(b.names),
            "y_rounds": d if full_y_rounds else d - 1}
    return b.finish("P8d_d3plus", 8 * d, n, d, meta=meta, witness_names=witness)


def _p8d_witness(i: int, j: int, d: int, codes) -> list[str]:
    # round k: a1 -> uA -> uB -> b1 -> b2 -> lB -> lA -> a2, then the x edge into round k+1
    ci, cj = codes[i - 1], codes[j - 1]
    seq: list[str] = []
    for k in range(1, d + 1):
        seq += [f"a1_{i}_{k}", f"uA_{ci[k - 1]}", f"uB_{ci[k - 1]}", f"b1_{i}_{k}",
                f"b2_{j}_{k}", f"lB_{cj[k - 1]}", f"lA_{cj[k - 1]}", f"a2_{j}_{k}"]
    return seq


# ---------------------------------------------------------------------------
# three-party gadget (number-on-forehead)

@dataclass
class TriangleBase:
    """Tripartite graph in which every edge lies in exactly one triangle."""
    graph: Graph
    parts: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    triangles: list[tuple[int, int, int]]    # (a, b, c) with a in A, b in B, c in C


def validate_base(g: Graph, parts) -> TriangleBase:
    part_of = {}
    for p, nodes in enumerate(parts):
        for v in nodes:
            part_of[v] = p
    if sorted(part_of) != list(g.nodes()):
        raise GadgetError("parts must cover every node exactly once")
    for a, b in g.edges():
        if part_of[a] == part_of[b]:
            raise GadgetError(f"edge ({a}, {b}) inside one part")
    adj = [g.neighbor_set(v) for v in g.nodes()]
    tris = []
    for a, b in g.edges():
        common = adj[a] & adj[b]
        if len(common) != 1:
            raise GadgetError(f"edge ({a}, {b}) lies in {len(common)} triangles")
        c = next(iter(common))
        t = sorted((a, b, c), key=lambda v: part_of[v])
        if tuple(part_of[v] for v in t) != (0, 1, 2):
            raise GadgetError(f"triangle {t} is not tripartite")
        tris.append(tuple(t))
    return TriangleBase(g, tuple(tuple(p) for p in parts), sorted(set(tris)))


def ap_free_set(limit: int) -> list[int]:
    """Greedy set in [1, limit) with no three-term arithmetic progression."""
    out: list[int] = []
    for v in range(1, limit):
        if not any(2 * b - a == v for a, b in combinations(out, 2)):
            out.append(v)
    return out


def triangle_base(m: int, steps: Sequence[int] | None = None) -> TriangleBase:
    """Triangles (a, a+s, a+2s) across parts [m], [2m], [3m] for each step s in a 3-AP-free set."""
    steps = list(steps) if steps is not None else ap_free_set(m + 1)
    A = list(range(m))
    B = list(range(m, 3 * m))
    C = list(range(3 * m, 6 * m))
    edges = set()
    for a in range(m):
        for s in steps:
            u, v, w = A[a], B[a + s], C[a + 2 * s]
            edges |= {(u, v), (u, w), (v, w)}
    g = Graph(6 * m, sorted(edges))
    return validate_base(g, (A, B, C))


def single_triangle_base() -> TriangleBase:
    return validate_base(Graph(3, [(0, 1), (0, 2), (1, 2)]), ((0,), (1,), (2,)))


def build_nof_p5(XA, XB, XC, base: TriangleBase) -> GadgetGraph:
    """Blow the complement of the pruned base up into triangles, plus two hubs."""
    XA, XB, XC = _bits(XA), _bits(XB), _bits(XC)
    t = len(base.triangles)
    if not len(XA) == len(XB) == len(XC) == t:
        raise GadgetError(f"inputs must have one bit per triangle ({t})")
    g = base.graph
    removed = set()
    for i, (a, bb, c) in enumerate(base.triangles):
        if XA[i] == 0:
            removed.add((min(bb, c), max(bb, c)))
        if XB[i] == 0:
            removed.add((min(a, c), max(a, c)))
        if XC[i] == 0:
            removed.add((min(a, bb), max(a, bb)))
    kept = set(g.edges()) - removed
    bld = _Builder()
    owner = {}
    for p, nodes in zip("ABC", base.parts):
        for v in nodes:
            owner[v] = p
    for v in g.nodes():
        for i in (1, 2, 3):
            bld.node(f"{v}_{i}", owner[v])
        bld.clique([f"{v}_{i}" for i in (1, 2, 3)])
    bld.node("x", "*")
    bld.node("y", "*")
    for i in (1, 2, 3):
        bld.clique([f"{v}_{i}" for v in g.nodes()])     # each index layer is a clique
    for u, v in combinations(g.nodes(), 2):
        if (u, v) in kept:
            continue
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                bld.edge(f"{u}_{i}", f"{v}_{j}")
    for v in g.nodes():
        bld.edge("x", f"{v}_1")
        bld.edge("x", f"{v}_2")
        bld.edge("y", f"{v}_2")
        bld.edge("y", f"{v}_3")
    witness = None
    for i, (a, bb, c) in enumerate(base.triangles):
        if XA[i] and XB[i] and XC[i]:
            witness = [f"{a}_1", "x", f"{bb}_2", "y", f"{c}_3"]
            break
    gg = bld.finish("NOF_P5", 5, g.node_count, 1, meta={"triangles": t}, witness_names=witness)
    gg.meta["owners"] = {p: sorted(v for v, s in bld.side.items() if s == p) for p in "ABC"}
    return gg


def nof_disjoint(XA, XB, XC) -> int:
    return 0 if any(a and b and c for a, b, c in zip(_bits(XA), _bits(XB), _bits(XC))) else 1


# ---------------------------------------------------------------------------
# locality lengthening

def _subdivide(gg: GadgetGraph, targets: list[tuple[int, int]], length: int,
               side_of_new) -> GadgetGraph:
    names = list(gg.names)
    edges = set(gg.graph.edges())
    alice, bob = set(gg.alice), set(gg.bob)
    colors = None if gg.graph.colors is None else list(gg.graph.colors)
    for a, b in targets:
        edges.discard((min(a, b), max(a, b)))
        prev = a
        for step in range(1, length):
            v = len(names)
            names.append(f"{names[a]}~{names[b]}#{step}")
            side = side_of_new(a, b)
            (alice if side == "A" else bob if side == "B" else set()).add(v)
            if colors is not None:
                colors.append(colors[a])
            edges.add((prev, v))
            prev = v
        edges.add((min(prev, b), max(prev, b)))
    g = Graph(len(names), sorted(edges), colors)
    return GadgetGraph(gg.family, g, names, gg.k_target, frozenset(alice), frozenset(bob),
                       gg.n, gg.d, dict(gg.meta), None)


def lengthen_for_locality(gg: GadgetGraph, locality: int) -> GadgetGraph:
    """Raise the locality the gadget defeats.

    NOF_P5: every edge at the hubs x and y grows by one node per extra locality
    step (target grows by 4 per step).  P22_d2 at locality 2: each cross edge
    between the code sets becomes a path of length 4 (target 28).
    """
    if locality < 1:
        raise GadgetError("locality must be positive")
    if gg.family == "NOF_P5":
        if locality == 1:
            return gg
        x, y = gg.index("x"), gg.index("y")
        targets = [(h, v) for h in (x, y) for v in gg.graph.neighbors(h)]
        out = _subdivide(gg, targets, locality, lambda a, b: "*")
        out.k_target = 5 + 4 * (locality - 1)
        out.meta["locality"] = locality
        return out
    if gg.family == "P22_d2":
        if locality == 1:
            return gg
        if locality != 2:
            raise GadgetError("P22 lengthening is defined for locality 2 only")
        cross = [(a, b) for a, b in gg.cut_edges
                 if gg.names[a][:2] in ("uA", "lA", "uB", "lB") and gg.names[b][:2] in ("uA", "lA", "uB", "lB")]
        out = _subdivide(gg, cross, 4, lambda a, b: "A")
        out.k_target = 28
        out.meta["locality"] = 2
        return out
    raise GadgetError(f"family {gg.family} has no lengthening rule")


# ---------------------------------------------------------------------------
# verification against disjointness

@dataclass
class IffCheck:
    family: str
    disj: int
    outcome: str            # "pass", "fail" or "inconclusive"
    has_path: bool | None
    elapsed: float
    path: tuple[int, ...] | None = None


def check_iff(gg: GadgetGraph, expected_disj: int, budget: float | None = 60.0) -> IffCheck:
    """Decide the target pattern with the oracle and compare with disjointness.

    The canonical witness shape is tried first; the full search only runs
    when it does not apply.
    """
    import time
    t0 = time.perf_counter()
    if gg.family == "ORDERED_P5":
        has = ordered_induced_path_exists(gg.graph, 5)
        res = PathSearch("found" if has else "absent")
    else:
        hints = [gg.witness] if gg.witness else []
        if gg.graph.node_count < gg.k_target:
            res = PathSearch("absent")
        else:
            res = find_induced_path(gg.graph, gg.k_target, budget, hints=hints)
    dt = time.perf_counter() - t0
    if res.status == "budget":
        return IffCheck(gg.family, expected_disj, "inconclusive", None, dt)
    has = res.status == "found"
    ok = has == (expected_disj == 0)
    return IffCheck(gg.family, expected_disj, "pass" if ok else "fail", has, dt, res.path)


def p22_block_counts(gg: GadgetGraph, path: Sequence[int]) -> dict[str, int]:
    """Nodes of ``path`` per block, for the exactly-two-per-block structure check."""
    out: dict[str, int] = {}
    for v in path:
        nm = gg.names[v]
        key = nm.split("_")[0] if "_" in nm else nm
        out[key] = out.get(key, 0) + 1
    return out
