"""Proof-labeling scheme (locality 1) for P5-freeness with O(n log n)-bit certificates.

The prover is centralized.  The verifier evaluates every node from its own
certificate, its neighbours' certificates and the neighbour ids only.
Certificates have a compact binary encoding whose length is what the size
bound is measured on.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .congest import RootedTree
from .graphcore import Graph, bfs_distances, enumerate_pattern_catalog, subset_mask
from .p5 import CollectState, dangerous_copies, group_count, iter_p5, pair_label

# edge categories as seen from one endpoint
NEAR, TILDE, BAD, LOOSE, E23, E33 = range(6)
CATEGORY_NAMES = ("near", "marked22", "bad", "unmarked22", "e23", "e33")
COUNTERS = ("tilde", "bad", "e23", "e33")
MAX_DIST = 3
IMBALANCE = 6


def _width(n: int) -> int:
    return max(1, (n - 1).bit_length())


# ---------------------------------------------------------------------------
# sum aggregation over a rooted tree

@dataclass
class SumCertificate:
    """Claimed total (one copy per node, or a single shared value) and subtree partials."""
    total: int | list[int]
    partial: list[int]

    def total_at(self, u: int) -> int:
        return self.total[u] if isinstance(self.total, list) else self.total


def honest_sum(tree: RootedTree, a: Sequence[int]) -> SumCertificate:
    part = list(a)
    for v in sorted(range(len(a)), key=lambda x: -tree.depth[x]):
        p = tree.parent[v]
        if p >= 0:
            part[p] += part[v]
    return SumCertificate(part[tree.root], part)


def certify_sum(tree: RootedTree, a: Sequence[int], cert: SumCertificate) -> list[bool]:
    """Per-node verdicts of the subtree-sum check; all true iff the claimed total is the sum."""
    kids = tree.children()
    out = []
    for u in range(len(a)):
        ok = cert.partial[u] == a[u] + sum(cert.partial[c] for c in kids[u])
        for w in kids[u] + ([tree.parent[u]] if tree.parent[u] >= 0 else []):
            ok = ok and cert.total_at(w) == cert.total_at(u)
        if u == tree.root:
            ok = ok and cert.total_at(u) == cert.partial[u]
        out.append(ok)
    return out


# ---------------------------------------------------------------------------
# certificates

@dataclass
class NodeCert:
    node: int
    n: int
    nbrs: tuple[int, ...]
    dist: tuple[int, ...]            # distance to every node, capped encoding 0..3
    root: int
    parent: int                      # == node at the root
    layers: tuple[int, ...]          # distance of every node from the root
    s: int
    groups: tuple[int, ...]          # 1..s
    root_nbrs: tuple[tuple[int, int], ...]   # (id, degree), by degree desc then id
    counters: tuple[tuple[int, int], ...]    # (total, subtree partial) per COUNTERS entry
    patterns: tuple[tuple[int, int], ...]    # (total, subtree partial) per catalog pattern
    cats: tuple[int, ...]            # category of the edge to each neighbour, aligned with nbrs
    edges: tuple[tuple[int, int], ...] = ()  # routed edges when this node carries a label

    def labels(self) -> list[int]:
        return [v for v, _ in self.root_nbrs]

    def shared(self):
        return (self.n, self.root, self.layers, self.s, self.groups, self.root_nbrs,
                tuple(t for t, _ in self.counters), tuple(t for t, _ in self.patterns))


class _Writer:
    def __init__(self):
        self.value = 0
        self.size = 0

    def put(self, x: int, w: int):
        if x < 0 or x >= 1 << w:
            raise ValueError(f"value {x} does not fit in {w} bits")
        self.value |= x << self.size
        self.size += w


class _Reader:
    def __init__(self, value: int, size: int):
        self.value, self.size, self.pos = value, size, 0

    def get(self, w: int) -> int:
        if self.pos + w > self.size:
            raise ValueError("truncated certificate")
        x = (self.value >> self.pos) & ((1 << w) - 1)
        self.pos += w
        return x


def _widths(n: int, s: int):
    L = _width(n)
    return L, 2 * L + 2, max(1, (s - 1).bit_length()), 2 * L + 1, 5 * L + 1


def encode_cert(c: NodeCert) -> tuple[int, int]:
    """Binary wire form ``(bits, length)``: 6-bit size header, fixed-width ids, length-prefixed lists."""
    w = _Writer()
    nb = max(1, c.n.bit_length())
    w.put(nb, 6)
    w.put(c.n, nb)
    L, LEN, G, CNT, PAT = _widths(c.n, c.s)
    w.put(c.node, L)
    w.put(len(c.nbrs), LEN)
    for v in c.nbrs:
        w.put(v, L)
    for d in c.dist:
        w.put(d, 2)
    w.put(c.root, L)
    w.put(c.parent, L)
    for d in c.layers:
        w.put(d, 2)
    w.put(c.s, L + 1)
    for gi in c.groups:
        w.put(gi - 1, G)
    w.put(len(c.root_nbrs), LEN)
    for v, d in c.root_nbrs:
        w.put(v, L)
        w.put(d, L + 1)
    for t, p in c.counters:
        w.put(t, CNT)
        w.put(p, CNT)
    w.put(len(c.patterns), 6)
    nz = [(h, t, p) for h, (t, p) in enumerate(c.patterns) if t or p]
    w.put(len(nz), 6)
    for h, t, p in nz:      # only non-zero patterns are written
        w.put(h, 6)
        w.put(t, PAT)
        w.put(p, PAT)
    for k in c.cats:
        w.put(k, 3)
    w.put(len(c.edges), LEN)
    for a, b in c.edges:
        w.put(a, L)
        w.put(b, L)
    return w.value, w.size


def decode_cert(bits: int, size: int) -> NodeCert:
    r = _Reader(bits, size)
    nb = r.get(6)
    n = r.get(nb)
    if n < 1:
        raise ValueError("empty network")
    L = _width(n)
    node = r.get(L)
    nbrs = tuple(r.get(L) for _ in range(r.get(2 * L + 2)))
    dist = tuple(r.get(2) for _ in range(n))
    root, parent = r.get(L), r.get(L)
    layers = tuple(r.get(2) for _ in range(n))
    s = r.get(L + 1)
    if s < 1:
        raise ValueError("no groups")
    L, LEN, G, CNT, PAT = _widths(n, s)
    groups = tuple(r.get(G) + 1 for _ in range(n))
    root_nbrs = tuple((r.get(L), r.get(L + 1)) for _ in range(r.get(LEN)))
    counters = tuple((r.get(CNT), r.get(CNT)) for _ in COUNTERS)
    pats = [(0, 0)] * r.get(6)
    for _ in range(r.get(6)):
        h = r.get(6)
        if h >= len(pats):
            raise ValueError("pattern index")
        pats[h] = (r.get(PAT), r.get(PAT))
    patterns = tuple(pats)
    cats = tuple(r.get(3) for _ in nbrs)
    edges = tuple((r.get(L), r.get(L)) for _ in range(r.get(LEN)))
    if r.pos != size:
        raise ValueError("trailing bits")
    return NodeCert(node, n, nbrs, dist, root, parent, layers, s, groups, root_nbrs,
                    counters, patterns, cats, edges)


def _wellformed(c: NodeCert | None, n_hint: int | None = None) -> bool:
    """Range checks that keep the verifier from indexing out of bounds."""
    if c is None:
        return False
    try:
        n = c.n
        ids = [c.node, c.root, c.parent, *c.nbrs, *(v for v, _ in c.root_nbrs),
               *(x for e in c.edges for x in e)]
        if any(not (0 <= v < n) for v in ids):
            return False
        if len(c.dist) != n or len(c.layers) != n or len(c.groups) != n:
            return False
        if any(not (0 <= d <= MAX_DIST) for d in c.dist + c.layers):
            return False
        if c.s < 1 or any(not (1 <= gi <= c.s) for gi in c.groups):
            return False
        if len(c.cats) != len(c.nbrs) or any(not (0 <= k < len(CATEGORY_NAMES)) for k in c.cats):
            return False
        if len(c.counters) != len(COUNTERS) or len(c.patterns) != len(enumerate_pattern_catalog()):
            return False
        return True
    except (TypeError, ValueError):
        return False


@dataclass
class CertificateBundle:
    n: int
    certs: list            # NodeCert, or None for an undecodable certificate
    certifiable: bool = True
    seed: int = 0
    resamples: int = 0

    def encoded(self) -> list[tuple[int, int]]:
        return [encode_cert(c) for c in self.certs]

    def sizes(self) -> list[int]:
        return [encode_cert(c)[1] for c in self.certs]

    def max_bits(self) -> int:
        return max(self.sizes(), default=0)

    def to_bytes(self) -> bytes:
        """Length-prefixed concatenation of the node encodings."""
        out = bytearray(self.n.to_bytes(4, "big"))
        for bits, size in self.encoded():
            out += size.to_bytes(4, "big")
            out += bits.to_bytes((size + 7) // 8, "little")
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "CertificateBundle":
        n = int.from_bytes(data[:4], "big")
        pos, certs = 4, []
        for _ in range(n):
            size = int.from_bytes(data[pos:pos + 4], "big")
            pos += 4
            nbytes = (size + 7) // 8
            bits = int.from_bytes(data[pos:pos + nbytes], "little")
            pos += nbytes
            try:
                certs.append(decode_cert(bits, size))
            except ValueError:
                certs.append(None)
        return cls(n, certs)

    def to_json(self) -> dict:
        def one(c):
            if c is None:
                return None
            d = c.__dict__.copy()
            d["bits"] = encode_cert(c)[1]
            return d
        return {"n": self.n, "certifiable": self.certifiable, "seed": self.seed,
                "max_bits": self.max_bits(), "certs": [one(c) for c in self.certs]}


# ---------------------------------------------------------------------------
# shared structure (prover side, and the per-node counting table)

def _structure(g: Graph, root: int, layers: Sequence[int], groups: Sequence[int], s: int,
               labels: Sequence[int], dist: Sequence[Sequence[int]]) -> CollectState:
    """Edge classes implied by a root, layering and partition on the true graph."""
    adj = [g.neighbor_set(v) for v in g.nodes()]
    st = CollectState(root, list(layers), list(groups), s, list(labels))
    v1 = [frozenset(y for y in adj[x] if layers[y] == 1) for x in g.nodes()]
    has3 = [any(layers[y] == 3 for y in adj[x]) for x in g.nodes()]
    for a, b in g.edges():
        la, lb = layers[a], layers[b]
        if (la, lb) == (2, 2):
            st.e22.add((a, b))
            vk = labels[pair_label(groups[a], groups[b], s) - 1]
            if min(dist[a][vk], dist[b][vk]) <= 2 or has3[a] or has3[b]:
                st.tilde.add((a, b))
            elif v1[a] == v1[b]:
                st.fbad.add((a, b))
        elif {la, lb} == {2, 3}:
            st.e23.add((a, b))
        elif (la, lb) == (3, 3):
            st.e33.add((a, b))
    near = {root} | adj[root]
    st.edges_at_r = {e for e in g.edges() if e[0] in near or e[1] in near}
    for a, b in st.e22 | st.e23:
        vk = labels[pair_label(groups[a], groups[b], s) - 1]
        if min(dist[a][vk], dist[b][vk]) <= 2:
            st.edges_at_r.add((a, b))
    return st


def _designated_table(g: Graph, st: CollectState) -> list[list[int]]:
    """Per node, per catalog pattern: dangerous copies that node is responsible for counting."""
    cat = enumerate_pattern_catalog()
    table = [[0] * len(cat) for _ in g.nodes()]
    for path, who in dangerous_copies(g, st):
        if who is not None and who >= 0:
            table[who][cat.index_of(subset_mask(g, path)) - 1] += 1
    return table


def _all_distances(g: Graph) -> list[list[int]]:
    return [[d if d >= 0 else 99 for d in bfs_distances(g, v)] for v in g.nodes()]


def _classify(lu: int, lv: int, marked: bool, same_v1: bool) -> int | None:
    if min(lu, lv) <= 1:
        return NEAR
    if lu == lv == 2:
        return TILDE if marked else (BAD if same_v1 else LOOSE)
    if {lu, lv} == {2, 3}:
        return E23
    if lu == lv == 3:
        return E33
    return None


# ---------------------------------------------------------------------------
# prover

def prove(g: Graph, seed: int = 0, max_resamples: int = 20) -> CertificateBundle:
    """Honest certificates for a connected graph.

    The partition is resampled until every labelled node carries at most
    6n routed edges (the least loaded draw is kept otherwise).  Graphs of
    diameter at least 4 get a bundle flagged as not certifiable, with the
    distance fields capped, which the verifier rejects.
    """
    n = g.node_count
    dist = _all_distances(g)
    certifiable = all(d <= MAX_DIST for row in dist for d in row)
    root = min(g.nodes(), key=lambda v: (-g.degree(v), v))
    layers = [min(d, MAX_DIST) for d in dist[root]]
    s = group_count(n, g.edge_count, g.degree(root)) if g.edge_count else 1
    root_nbrs = tuple(sorted(((v, g.degree(v)) for v in g.neighbors(root)),
                             key=lambda x: (-x[1], x[0])))
    labels = [v for v, _ in root_nbrs]
    best = None
    for attempt in range(max_resamples + 1):
        rng = np.random.default_rng([seed, 0x5A17, attempt])
        groups = [int(x) + 1 for x in rng.integers(0, s, size=n)]
        st = _structure(g, root, layers, groups, s, labels, dist) if certifiable or labels else None
        routed: dict[int, list] = {}
        if st is not None:
            for a, b in sorted(st.e22 | st.e23):
                vk = labels[pair_label(groups[a], groups[b], s) - 1]
                if min(dist[a][vk], dist[b][vk]) <= 2:
                    routed.setdefault(vk, []).append((a, b))
        load = max((len(x) for x in routed.values()), default=0)
        if best is None or load < best[0]:
            best = (load, groups, st, routed, attempt)
        if load <= IMBALANCE * n:
            break
    load, groups, st, routed, attempt = best

    # spanning tree toward the root, smallest-id parent one layer up
    parent = [root] * n
    depth = [min(d, 99) for d in dist[root]]
    for v in g.nodes():
        if v != root:
            ups = [w for w in g.neighbors(v) if depth[w] == depth[v] - 1]
            parent[v] = min(ups) if ups else root
    tree = RootedTree(root, tuple(-1 if v == root else parent[v] for v in range(n)),
                      tuple(min(d, n) for d in depth))

    cats: list[tuple[int, ...]] = []
    counts = {c: [0] * n for c in COUNTERS}
    adj = [g.neighbor_set(v) for v in g.nodes()]
    v1 = [frozenset(y for y in adj[x] if layers[y] == 1) for x in g.nodes()]
    for u in g.nodes():
        row = []
        for v in g.neighbors(u):
            e = (min(u, v), max(u, v))
            if st is None:
                k = NEAR
            elif e in st.tilde:
                k = TILDE
            elif e in st.fbad:
                k = BAD
            elif e in st.e22:
                k = LOOSE
            else:
                k = _classify(layers[u], layers[v], True, v1[u] == v1[v])
                k = NEAR if k is None else k
            row.append(k)
            if k == TILDE and u < v:
                counts["tilde"][u] += 1
            elif k == BAD and u < v:
                counts["bad"][u] += 1
            elif k == E23 and layers[u] == 2:
                counts["e23"][u] += 1
            elif k == E33 and u < v:
                counts["e33"][u] += 1
        cats.append(tuple(row))
    sums = {c: honest_sum(tree, counts[c]) for c in COUNTERS}

    ncat = len(enumerate_pattern_catalog())
    table = _designated_table(g, st) if (st is not None and certifiable) else [[0] * ncat for _ in range(n)]
    pat_sums = [honest_sum(tree, [table[u][h] for u in range(n)]) for h in range(ncat)]

    certs = []
    for u in g.nodes():
        certs.append(NodeCert(
            node=u, n=n, nbrs=g.neighbors(u), dist=tuple(min(d, MAX_DIST) for d in dist[u]),
            root=root, parent=parent[u], layers=tuple(layers), s=s, groups=tuple(groups),
            root_nbrs=root_nbrs,
            counters=tuple((sums[c].total, sums[c].partial[u]) for c in COUNTERS),
            patterns=tuple((ps.total, ps.partial[u]) for ps in pat_sums),
            cats=cats[u], edges=tuple(routed.get(u, ()))))
    return CertificateBundle(n, certs, certifiable, seed, attempt)


# ---------------------------------------------------------------------------
# verifier

@dataclass
class Verdicts:
    accept: list[bool]
    reasons: list[str]

    @property
    def all_accept(self) -> bool:
        return all(self.accept)

    @property
    def rejecting(self) -> list[int]:
        return [u for u, ok in enumerate(self.accept) if not ok]

    def to_json(self) -> dict:
        return {"all_accept": self.all_accept, "rejecting": self.rejecting,
                "reasons": {u: self.reasons[u] for u in self.rejecting}}


class _Reject(Exception):
    pass


def _need(cond: bool, why: str):
    if not cond:
        raise _Reject(why)


class _Ball:
    """A node's view: its id, its neighbours' ids and the certificates on its closed neighbourhood."""

    def __init__(self, u: int, nbr_ids: Sequence[int], view: dict):
        self.u = u
        self.nbr_ids = tuple(sorted(nbr_ids))
        self.view = view
        self.me: NodeCert = view[u]
        self.closed = frozenset(view)
        self.nb = {x: frozenset(c.nbrs) for x, c in view.items()}
        self.cat = {x: dict(zip(c.nbrs, c.cats)) for x, c in view.items()}


def verify_node(u: int, nbr_ids: Sequence[int], view: dict,
                designated: Callable[[NodeCert], Sequence[int]] | None = None) -> tuple[bool, str]:
    """Verdict of node ``u``; ``view`` maps each id in N[u] to its certificate (None if unreadable).

    ``designated(cert)`` returns, per catalog pattern, how many dangerous
    copies ``u`` itself must count under the structure described by ``cert``.
    """
    try:
        _check(u, nbr_ids, view, designated)
        return True, ""
    except _Reject as e:
        return False, str(e)


def _check(u, nbr_ids, view, designated):
    _need(all(_wellformed(view.get(x)) for x in [u, *nbr_ids]), "malformed")
    B = _Ball(u, nbr_ids, view)
    me, n = B.me, B.me.n
    _need(me.node == u, "node id")
    _need(tuple(me.nbrs) == B.nbr_ids, "neighbour list")
    for x in B.nbr_ids:
        _need(view[x].shared() == me.shared(), "disagreement")
        _need(view[x].node == x, "neighbour id")

    # exact distances, hence diameter at most 3
    _need(me.dist[u] == 0, "distance to self")
    for w in range(n):
        if w == u:
            continue
        d = me.dist[w]
        _need(d >= 1, "zero distance")
        ds = [view[x].dist[w] for x in B.nbr_ids]
        _need(all(abs(e - d) <= 1 for e in ds), "distance jump")
        _need(d - 1 in ds, "distance witness")

    # spanning tree and layering toward the root
    layers, root = me.layers, me.root
    _need(layers[u] == me.dist[root], "layer")
    if u == root:
        _need(me.parent == u, "root parent")
        _need(sorted(v for v, _ in me.root_nbrs) == list(B.nbr_ids), "root neighbours")
    else:
        _need(me.parent in B.closed and me.parent != u and layers[me.parent] == layers[u] - 1, "parent")
    ids = [v for v, _ in me.root_nbrs]
    _need(len(set(ids)) == len(ids), "duplicate label")
    _need(list(me.root_nbrs) == sorted(me.root_nbrs, key=lambda x: (-x[1], x[0])), "label order")
    _need(len(B.nbr_ids) <= len(me.root_nbrs) or n == 1, "root degree")
    if u in ids:
        _need(dict(me.root_nbrs)[u] == len(B.nbr_ids), "own degree entry")
    s = me.s
    _need(s == 1 or s * s <= len(ids), "group count")
    labels = ids

    # edge categories and collect conditions
    v1 = lambda x: frozenset(y for y in B.nb[x] if layers[y] == 1)
    has3 = lambda x: any(layers[y] == 3 for y in B.nb[x])
    a = dict.fromkeys(COUNTERS, 0)
    for v, k in zip(me.nbrs, me.cats):
        marked = has3(u) or has3(v)
        if layers[u] == 2 and layers[v] == 2:
            kk = pair_label(me.groups[u], me.groups[v], s)
            _need(kk <= len(labels), "missing label")
            vk = labels[kk - 1]
            marked = marked or min(me.dist[vk], view[v].dist[vk]) <= 2
        want = _classify(layers[u], layers[v], marked, v1(u) == v1(v))
        _need(want is not None and k == want, "edge category")
        _need(B.cat[v].get(u) == k, "category mismatch")
        _need(k != LOOSE, "condition2")
        if k == BAD:
            for w in B.nb[u]:
                if layers[w] == 2:
                    _need(v1(u) <= B.nb[w], "condition3")
        if k == E33:
            v2 = lambda x: frozenset(y for y in B.nb[x] if layers[y] == 2)
            _need(v2(u) == v2(v), "condition4")
        if k == TILDE and u < v:
            a["tilde"] += 1
        elif k == BAD and u < v:
            a["bad"] += 1
        elif k == E23 and layers[u] == 2:
            a["e23"] += 1
        elif k == E33 and u < v:
            a["e33"] += 1

    # subtree sums for the counters and the dangerous-copy counts
    kids = [x for x in B.nbr_ids if view[x].parent == u and x != root]
    own = designated(me) if designated is not None else [0] * len(me.patterns)
    for i, c in enumerate(COUNTERS):
        _need(me.counters[i][1] == a[c] + sum(view[x].counters[i][1] for x in kids), f"sum {c}")
    for h, (tot, part) in enumerate(me.patterns):
        _need(part == own[h] + sum(view[x].patterns[h][1] for x in kids), "pattern sum")
    if u == root:
        _need(all(t == p for t, p in me.counters), "root totals")
        _need(all(t == p for t, p in me.patterns), "root pattern totals")

    # routed edge list carried by a labelled node
    if u in labels[: s * s]:
        k = labels.index(u) + 1
        seen = set()
        for x, y in me.edges:
            _need(x < y and (x, y) not in seen, "edge list form")
            seen.add((x, y))
            _need({layers[x], layers[y]} in ({2}, {2, 3}), "edge list layer")
            _need(pair_label(me.groups[x], me.groups[y], s) == k, "edge list pair")
            _need(min(me.dist[x], me.dist[y]) <= 2, "edge list reach")
    else:
        _need(not me.edges, "unlabelled edge list")
    # listed pairs touching my closed neighbourhood must be real edges
    for x in [u, *B.nbr_ids]:
        for p, q in view[x].edges:
            if p in B.closed:
                _need(q in B.nb[p], "listed non-edge")
            if q in B.closed:
                _need(p in B.nb[q], "listed non-edge")

    _need(not _special_path(B), "special-path")

    if u == root:
        known = {(min(x, y), max(x, y)) for x in B.closed for y in B.nb[x]}
        l22 = l23 = 0
        for x in B.nbr_ids:
            for p, q in view[x].edges:
                known.add((p, q))
                if layers[p] == layers[q] == 2:
                    l22 += 1
                else:
                    l23 += 1
        _need(l22 == me.counters[0][0] and l23 == me.counters[2][0], "condition1")
        adj = [set() for _ in range(n)]
        for p, q in known:
            adj[p].add(q)
            adj[q].add(p)
        local = sum(1 for _ in iter_p5(adj))
        _need(local == sum(t for t, _ in me.patterns), "count")


def _special_path(B: _Ball) -> bool:
    """Search the ball for an induced P5 through a hidden edge whose every pair the node can settle."""
    layers = B.me.layers
    memo: dict = {}

    def derive(x, y):
        if abs(layers[x] - layers[y]) >= 2:
            return False
        bad = [p for p in B.closed if B.cat[p].get(x) == BAD]
        if bad:
            if layers[y] == 3:
                return False
            if layers[y] == 1:
                return y in B.nb[bad[0]]
            if layers[y] == 2:
                for p in bad:
                    for z in B.nb[p]:
                        if layers[z] == 1 and z in B.closed and y not in B.nb[z]:
                            return False
        if layers[y] == 2:
            for p in B.closed:
                if B.cat[p].get(x) == E33:
                    return y in B.nb[p]
        return None

    def adj(x, y):
        key = (x, y) if x < y else (y, x)
        if key not in memo:
            if x in B.closed:
                memo[key] = y in B.nb[x]
            elif y in B.closed:
                memo[key] = x in B.nb[y]
            else:
                r = derive(x, y)
                memo[key] = derive(y, x) if r is None else r
        return memo[key]

    ball = set(B.closed).union(*B.nb.values())

    def grow(path):
        if len(path) == 5:
            return True
        for end, rest in ((path[-1], path[:-1]), (path[0], path[1:])):
            for y in ball:
                if y in path or adj(end, y) is not True:
                    continue
                if all(adj(z, y) is False for z in rest):
                    nxt = path + [y] if end == path[-1] else [y] + path
                    if grow(nxt):
                        return True
        return False

    for p in B.closed:
        for x, k in B.cat[p].items():
            if k in (BAD, E33) and grow([p, x]):
                return True
    return False


def _designated_fn(g: Graph):
    """Counting-table lookup keyed by the structure a certificate describes (cached per structure)."""
    cache: dict = {}
    dist = _all_distances(g)

    def fn(c: NodeCert):
        key = (c.root, c.layers, c.s, c.groups, c.root_nbrs)
        if key not in cache:
            try:
                st = _structure(g, c.root, c.layers, c.groups, c.s, c.labels(), dist)
                cache[key] = _designated_table(g, st)
            except (IndexError, KeyError):
                cache[key] = None
        table = cache[key]
        if table is None:
            raise _Reject("structure")
        return table[c.node]
    return fn


def verify(g: Graph, bundle: CertificateBundle) -> Verdicts:
    """Run every node's locality-1 check."""
    fn = _designated_fn(g)
    acc, why = [], []
    for u in g.nodes():
        ball = [u, *g.neighbors(u)]
        view = {x: bundle.certs[x] for x in ball}
        try:
            ok, r = verify_node(u, g.neighbors(u), view, fn)
        except _Reject as e:
            ok, r = False, str(e)
        acc.append(ok)
        why.append(r)
    return Verdicts(acc, why)


# ---------------------------------------------------------------------------
# mutants for soundness fuzzing

SEMANTIC_KINDS = ("edge-insert", "edge-delete", "partition", "counter", "pattern-count",
                  "edge-list", "distance", "category")


def flip_bit(bundle: CertificateBundle, node: int, pos: int) -> CertificateBundle:
    bits, size = encode_cert(bundle.certs[node])
    bits ^= 1 << (pos % size)
    try:
        c = decode_cert(bits, size)
    except ValueError:
        c = None
    certs = list(bundle.certs)
    certs[node] = c
    return replace(bundle, certs=certs)


def semantic_mutant(bundle: CertificateBundle, kind: str, rng: np.random.Generator) -> CertificateBundle:
    """One targeted corruption of an honest-style bundle."""
    certs = list(bundle.certs)
    n = bundle.n
    u = int(rng.integers(n))
    c = certs[u]
    if kind == "edge-insert":
        cand = [v for v in range(n) if v != u and v not in c.nbrs]
        if cand:
            v = int(rng.choice(cand))
            pos = sorted(c.nbrs + (v,)).index(v)
            certs[u] = replace(c, nbrs=tuple(sorted(c.nbrs + (v,))),
                               cats=c.cats[:pos] + (NEAR,) + c.cats[pos:])
        else:
            certs[u] = replace(c, nbrs=c.nbrs[1:], cats=c.cats[1:])
    elif kind == "edge-delete":
        if c.nbrs:
            i = int(rng.integers(len(c.nbrs)))
            certs[u] = replace(c, nbrs=c.nbrs[:i] + c.nbrs[i + 1:], cats=c.cats[:i] + c.cats[i + 1:])
    elif kind == "partition":
        x = int(rng.integers(n))
        gi = list(c.groups)
        gi[x] = gi[x] % c.s + 1 if c.s > 1 else gi[x]
        s = c.s if c.s > 1 else 2
        certs = [replace(d, groups=tuple(gi), s=s) for d in certs]   # consistent everywhere
    elif kind == "counter":
        i = int(rng.integers(len(COUNTERS)))
        cnt = list(c.counters)
        cnt[i] = (cnt[i][0], cnt[i][1] + 1)
        certs[u] = replace(c, counters=tuple(cnt))
    elif kind == "pattern-count":
        h = int(rng.integers(len(c.patterns)))
        tot = c.patterns[h][0] + 1
        certs = [replace(d, patterns=tuple((tot, p + (1 if d.node == d.root else 0)) if j == h else (t, p)
                                           for j, (t, p) in enumerate(d.patterns))) for d in certs]
    elif kind == "edge-list":
        holders = [d.node for d in certs if d.edges]
        if holders:
            d = certs[int(rng.choice(holders))]
            i = int(rng.integers(len(d.edges)))
            certs[d.node] = replace(d, edges=d.edges[:i] + d.edges[i + 1:])
        else:
            v = int(rng.integers(n))
            certs[u] = replace(c, edges=((min(u, v), max(u, v)),) if v != u else ((0, 1),))
    elif kind == "distance":
        w = int(rng.integers(n))
        dist = list(c.dist)
        dist[w] = (dist[w] + 1) % (MAX_DIST + 1)
        certs[u] = replace(c, dist=tuple(dist))
    elif kind == "category":
        if c.cats:
            i = int(rng.integers(len(c.cats)))
            cats = list(c.cats)
            cats[i] = (cats[i] + 1 + int(rng.integers(len(CATEGORY_NAMES) - 1))) % len(CATEGORY_NAMES)
            certs[u] = replace(c, cats=tuple(cats))
    else:
        raise ValueError(f"unknown mutant kind {kind!r}")
    return replace(bundle, certs=certs)


def size_constant(bundle: CertificateBundle) -> float:
    """max certificate bits / (n * ceil(log2 n)), with log taken as at least 1."""
    n = bundle.n
    return bundle.max_bits() / (n * max(1, (n - 1).bit_length()))
