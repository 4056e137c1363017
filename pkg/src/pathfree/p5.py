"""CONGEST test for P5-freeness.

Branches, chosen after an exact diameter computation:

* diameter >= 4: reject (two far-apart nodes and a shortest path between
  them already give an induced P5);
* few edges (``m <= c * n * ln(n)^2``): the max-degree node ``r`` collects
  every edge over a BFS tree and decides locally;
* diameter <= 2: neighbour lists are exchanged, edges between the far
  layer are routed to ``r`` through labelled neighbours of ``r``;
* diameter 3: the collect procedure (steps 1-5 with rejection conditions
  1-4), detection of paths that use edges ``r`` cannot see, counting of the
  copies whose hidden edges fake a P5 at ``r``, and a final comparison.

Every communication step is a simulated phase; node knowledge for the local
computations is taken from the phase outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .congest import (NetworkConfig, NodeProgram, PhaseLog, check_phase, convergecast_sum,
                      convergecast_vector, convergecast_wide, distributed_bfs,
                      distributed_diameter, bfs_tree, downcast, id_bits, neighbor_exchange,
                      pipeline_broadcast, run, upcast)
from .graphcore import Graph


@dataclass(frozen=True)
class P5Params:
    sparse_constant: float = 400.0    # sparse branch iff m <= c * n * ln(n)^2
    imbalance_constant: float = 6.0   # resample when a labelled node collects > c * n edges
    max_resamples: int = 3
    branch: str | None = None         # force "sparse" or "dense"


class PartitionAbort(RuntimeError):
    pass


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


# ---------------------------------------------------------------------------
# local path routines (used for node-local decisions)

def iter_p5(adj: Sequence[frozenset | set]) -> Iterator[tuple[int, ...]]:
    """Induced 5-node paths of a graph given as adjacency sets, each once (p[0] < p[4])."""
    n = len(adj)
    for s in range(n):
        stack = [(s,)]
        while stack:
            path = stack.pop()
            last = path[-1]
            for x in adj[last]:
                if x in path:
                    continue
                if any(x in adj[q] for q in path[:-1]):
                    continue
                if len(path) == 4:
                    if s < x:
                        yield path + (x,)
                else:
                    stack.append(path + (x,))


def count_p5(adj: Sequence[frozenset | set]) -> int:
    return sum(1 for _ in iter_p5(adj))


def p5_through_edges(adj: Sequence[frozenset | set], edges: Iterable[tuple[int, int]]
                     ) -> set[tuple[int, ...]]:
    """Induced 5-node paths that use at least one of ``edges`` as a path edge."""
    found: set[tuple[int, ...]] = set()

    def ok(path, x):
        return x not in path and not any(x in adj[q] for q in path[1:-1]) \
            and sum(1 for q in (path[0], path[-1]) if x in adj[q]) == 1

    for a, b in edges:
        stack = [(a, b)]
        while stack:
            path = stack.pop()
            if len(path) == 5:
                found.add(path if path[0] < path[-1] else path[::-1])
                continue
            for x in adj[path[-1]]:
                if x not in path and not any(x in adj[q] for q in path[:-1]):
                    stack.append(path + (x,))
            for x in adj[path[0]]:
                if x not in path and not any(x in adj[q] for q in path[1:]):
                    stack.append((x,) + path)
    return found


# ---------------------------------------------------------------------------
# small helper programs

class MaxFlood(NodeProgram):
    """``rounds`` rounds of flooding the maximum ``(degree, -id)``."""

    def initialize(self, view):
        super().initialize(view)
        self.rounds = view.input
        self.best = (len(view.neighbors), -view.node)

    def step(self, rnd, inbox):
        for m in inbox.values():
            d, v = m.values
            self.best = max(self.best, (d, -v))
        if rnd <= self.rounds:
            enc = self.view.encode
            return enc(("int", self.best[0], enc.id_width), ("id", -self.best[1]))
        self.halted = True
        return None

    def busy(self):
        return not self.halted

    def finalize(self):
        return (-self.best[1], self.best[0])


class NeighborStream(NodeProgram):
    """Send a token list to all neighbours, one per round; output what each neighbour sent."""

    def initialize(self, view):
        super().initialize(view)
        self.tokens = view.input
        self.got = {w: [] for w in view.neighbors}

    def step(self, rnd, inbox):
        for w, m in inbox.items():
            self.got[w].append(m.values)
        if rnd <= len(self.tokens):
            return self.view.encode(*self.tokens[rnd - 1])
        return None

    def finalize(self):
        return self.got


class DirectedStreams(NodeProgram):
    """Input ``{neighbour: token list}``; one token per round per link.

    Output: ``{sender: list of values}``.
    """

    def initialize(self, view):
        super().initialize(view)
        self.out = {w: list(ts) for w, ts in view.input.items() if ts}
        self.pos = 0
        self.got: dict[int, list] = {}

    def step(self, rnd, inbox):
        for w, m in inbox.items():
            self.got.setdefault(w, []).append(m.values)
        i = rnd - 1
        enc = self.view.encode
        msgs = {w: enc(*ts[i]) for w, ts in self.out.items() if i < len(ts)}
        return msgs or None

    def busy(self):
        return False

    def finalize(self):
        return self.got


# ---------------------------------------------------------------------------
# shared setup

@dataclass
class Setup:
    n: int
    m: int
    diameter: float
    root: int
    delta: int
    layer: list[int]
    tree: object


def _merge(log: PhaseLog, sub: PhaseLog, prefix: str = "") -> None:
    for name, t in sub.phases:
        log.add(prefix + name, t)


def setup_phase(g: Graph, cfg: NetworkConfig, log: PhaseLog) -> Setup:
    """Diameter, max-degree root, BFS layers and the edge count, all simulated."""
    n = g.node_count
    L = id_bits(n)
    diam, sub, _ = distributed_diameter(g, cfg)
    _merge(log, sub)
    if math.isinf(diam):
        raise ValueError("graph is disconnected")
    t0 = bfs_tree(g, 0)
    tr, _ = downcast([(("int", int(diam), L),)], t0, g, cfg)
    log.add("diameter-announce", check_phase(tr, "announce"))
    tr = check_phase(run(lambda v: MaxFlood(), g, cfg, inputs=[int(diam)] * n), "max-degree")
    log.add("max-degree", tr)
    root, delta = tr.node_outputs[0]
    assert all(o == (root, delta) for o in tr.node_outputs)
    tr, tree = distributed_bfs(g, root, cfg)
    log.add("bfs", check_phase(tr, "bfs"))
    tr, twice_m = convergecast_sum([g.degree(v) for v in range(n)], tree, g, cfg)
    log.add("edge-count", check_phase(tr, "edge-count"))
    m = twice_m // 2
    tr, _ = downcast([(("int", m, 2 * L),)], tree, g, cfg)
    log.add("edge-count-announce", check_phase(tr, "announce"))
    return Setup(n, m, diam, root, delta, list(tree.depth), tree)


def group_count(n: int, m: int, delta: int) -> int:
    """``ceil(sqrt(m/n))`` capped at ``floor(sqrt(delta))`` so every pair label names a neighbour of r."""
    if n == 0 or m == 0:
        return 1
    return max(1, min(math.ceil(math.sqrt(m / n)), math.isqrt(max(delta, 1))))


def pair_label(gi: int, gj: int, s: int) -> int:
    i, j = min(gi, gj), max(gi, gj)
    return i + (j - 1) * s


# ---------------------------------------------------------------------------
# collect state

@dataclass
class CollectState:
    root: int
    layer: list[int]
    groups: list[int]
    s: int
    labels: list[int]                       # labels[k-1] = node with label k
    tilde: set = field(default_factory=set)          # marked E22 edges
    fbad: set = field(default_factory=set)
    e22: set = field(default_factory=set)
    e23: set = field(default_factory=set)
    e33: set = field(default_factory=set)
    edges_at_r: set = field(default_factory=set)
    rejections: list = field(default_factory=list)   # (node, condition)
    resamples: int = 0
    collected_max: int = 0

    def hidden(self) -> set:
        return self.fbad | self.e33


class _Ctx:
    """Ground-truth adjacency plus the public facts every node has learnt."""

    def __init__(self, g: Graph, layer: list[int]):
        self.g = g
        self.adj = [g.neighbor_set(v) for v in range(g.node_count)]
        self.layer = layer

    def v1_of(self, x: int) -> frozenset:
        return frozenset(y for y in self.adj[x] if self.layer[y] == 1)

    def v2_of(self, x: int) -> frozenset:
        return frozenset(y for y in self.adj[x] if self.layer[y] == 2)


def _step1(g: Graph, cfg: NetworkConfig, log: PhaseLog) -> None:
    tr = check_phase(neighbor_exchange(g, cfg), "neighbour lists")
    log.add("step1-neighbour-lists", tr)
    for u, lists in enumerate(tr.node_outputs):
        for w, lst in lists.items():
            if frozenset(lst) != g.neighbor_set(w):
                raise AssertionError("neighbour list exchange lost data")


def _step2(g: Graph, cfg: NetworkConfig, log: PhaseLog, setup: Setup, s: int, attempt: int):
    n = g.node_count
    gbits = id_bits(max(s, 2))
    groups = [int(np.random.default_rng([cfg.seed & (2**64 - 1), 0x6209, attempt, v]).integers(s)) + 1
              for v in range(n)]
    items = [[(("int", setup.layer[v], 2), ("int", groups[v] - 1, gbits))] for v in range(n)]
    tr, know = pipeline_broadcast(items, g, cfg)
    log.add(f"step2-partition[{attempt}]", check_phase(tr, "partition"))
    for v in range(n):
        if len(know[v]) != n:
            raise AssertionError("partition broadcast incomplete")
    # every node derives the same labels: neighbours of r in ascending id order
    labels = sorted(v for v in range(n) if setup.layer[v] == 1)
    return groups, labels


def _route(g: Graph, cfg: NetworkConfig, log: PhaseLog, setup: Setup, ctx: _Ctx,
           groups: list[int], labels: list[int], s: int, wanted, attempt: int):
    """Step 4: neighbours of each labelled node forward the pair's edges, then it forwards to r.

    ``wanted(a, b)`` selects which edges are routed.  Returns the per-label
    collected sets and the edges r received.
    """
    n = g.node_count
    label_of = {v: k for k, v in enumerate(labels, start=1)}
    need_labels = s * s
    inputs = []
    for w in range(n):
        known = set()
        for x in ctx.adj[w] | {w}:
            for y in ctx.adj[x]:
                if wanted(x, y):
                    known.add(_edge(x, y))
        per: dict[int, list] = {}
        for a, b in sorted(known):
            k = pair_label(groups[a], groups[b], s)
            target = labels[k - 1]
            if target in ctx.adj[w]:
                per.setdefault(target, []).append((("id", a), ("id", b)))
        inputs.append(per)
    tr = check_phase(run(lambda v: DirectedStreams(), g, cfg, inputs=inputs), "step4 route")
    log.add(f"step4-route[{attempt}]", tr)
    collected: dict[int, set] = {}
    for k in range(1, min(need_labels, len(labels)) + 1):
        vk = labels[k - 1]
        got = set()
        for vals in tr.node_outputs[vk].values():
            for a, b in vals:
                got.add(_edge(a, b))
        # edges vk itself learnt in step 1
        for x in ctx.adj[vk]:
            for y in ctx.adj[x]:
                if wanted(x, y) and pair_label(groups[x], groups[y], s) == k:
                    got.add(_edge(x, y))
        collected[vk] = got
    to_root = [dict() for _ in range(n)]
    for vk, edges in collected.items():
        if edges:
            to_root[vk] = {setup.root: [(("id", a), ("id", b)) for a, b in sorted(edges)]}
    tr = check_phase(run(lambda v: DirectedStreams(), g, cfg, inputs=to_root), "step4 to root")
    log.add(f"step4-to-root[{attempt}]", tr)
    received = set()
    for vals in tr.node_outputs[setup.root].values():
        for a, b in vals:
            received.add(_edge(a, b))
    return collected, received


def _known_at_root_step1(ctx: _Ctx, root: int) -> set:
    """Edges r knows after neighbour-list exchange: all edges touching N[r]."""
    out = set()
    for x in ctx.adj[root] | {root}:
        for y in ctx.adj[x]:
            out.add(_edge(x, y))
    return out


# ---------------------------------------------------------------------------
# diameter <= 2

def _dense_diam2(g: Graph, cfg: NetworkConfig, params: P5Params, log: PhaseLog, setup: Setup):
    ctx = _Ctx(g, setup.layer)
    _step1(g, cfg, log)
    s = group_count(setup.n, setup.m, setup.delta)
    wanted = lambda a, b: setup.layer[a] == 2 and setup.layer[b] == 2
    for attempt in range(params.max_resamples + 1):
        groups, labels = _step2(g, cfg, log, setup, s, attempt)
        collected, received = _route(g, cfg, log, setup, ctx, groups, labels, s, wanted, attempt)
        biggest = max((len(c) for c in collected.values()), default=0)
        if biggest <= params.imbalance_constant * setup.n:
            break
    else:
        raise PartitionAbort("pair load stayed above the imbalance bound")
    edges = _known_at_root_step1(ctx, setup.root) | received
    return edges, attempt, biggest


def decide_diameter2(g: Graph, cfg: NetworkConfig, params: P5Params = P5Params()):
    """Dense procedure for graphs of diameter <= 2 (no sparse shortcut)."""
    log = PhaseLog()
    setup = setup_phase(g, cfg, log)
    if setup.diameter > 2:
        raise ValueError("diameter exceeds 2")
    edges, resamples, biggest = _dense_diam2(g, cfg, params, log, setup)
    return _local_verdict(g, edges, setup), log


def _local_verdict(g: Graph, edges: set, setup: Setup) -> bool:
    adj = [set() for _ in range(g.node_count)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    if len(edges) != setup.m:
        raise AssertionError(f"root reconstructed {len(edges)} of {setup.m} edges")
    return next(iter_p5(adj), None) is None


# ---------------------------------------------------------------------------
# diameter 3: collect procedure

class _EdgeBits(NodeProgram):
    """One round: send a bit along selected edges."""

    def initialize(self, view):
        super().initialize(view)
        self.bits = view.input
        self.got = {}

    def step(self, rnd, inbox):
        for w, m in inbox.items():
            self.got[w] = m.values[0]
        if rnd == 1 and self.bits:
            enc = self.view.encode
            return {w: enc(("bool", b)) for w, b in self.bits.items()}
        return None

    def finalize(self):
        return self.got


def _collect(g: Graph, cfg: NetworkConfig, params: P5Params, log: PhaseLog, setup: Setup) -> CollectState:
    n = g.node_count
    layer = setup.layer
    ctx = _Ctx(g, layer)
    adj = ctx.adj
    _step1(g, cfg, log)
    s = group_count(n, setup.m, setup.delta)
    e22, e23, e33 = set(), set(), set()
    for a, b in g.edges():
        la, lb = sorted((layer[a], layer[b]))
        if (la, lb) == (2, 2):
            e22.add((a, b))
        elif (la, lb) == (2, 3):
            e23.add((a, b))
        elif (la, lb) == (3, 3):
            e33.add((a, b))
    wanted = lambda a, b: {layer[a], layer[b]} <= {2, 3} and not (layer[a] == 3 and layer[b] == 3)
    v1 = [ctx.v1_of(x) for x in range(n)]

    for attempt in range(params.max_resamples + 1):
        groups, labels = _step2(g, cfg, log, setup, s, attempt)
        # step 3: each endpoint evaluates its half of the first marking rule
        half = [dict() for _ in range(n)]
        for a, b in e22:
            for u, v in ((a, b), (b, a)):
                vk = labels[pair_label(groups[u], groups[v], s) - 1]
                half[u][v] = any(vk in adj[x] for x in adj[u])
        tr = check_phase(run(lambda v: _EdgeBits(), g, cfg, inputs=half), "step3 halves")
        log.add(f"step3-halves[{attempt}]", tr)
        tilde, fbad = set(), set()
        for a, b in e22:
            rule1 = half[a][b] or tr.node_outputs[a][b]
            rule2 = any(layer[x] == 3 for x in adj[a] | adj[b])
            if rule1 or rule2:
                tilde.add((a, b))
            elif v1[a] == v1[b]:
                fbad.add((a, b))
        # each node tells its neighbours its marked / bad incident edges
        lists = [[] for _ in range(n)]
        for a, b in sorted(tilde | fbad):
            flag = (a, b) in fbad
            lists[a].append((("id", b), ("bool", flag)))
            lists[b].append((("id", a), ("bool", flag)))
        tr = check_phase(run(lambda v: NeighborStream(), g, cfg, inputs=lists), "step3 lists")
        log.add(f"step3-lists[{attempt}]", tr)
        collected, received = _route(g, cfg, log, setup, ctx, groups, labels, s, wanted, attempt)
        biggest = max((len(c) for c in collected.values()), default=0)
        if biggest <= params.imbalance_constant * n:
            break
    else:
        raise PartitionAbort("pair load stayed above the imbalance bound")

    st = CollectState(setup.root, layer, groups, s, labels, tilde, fbad, e22, e23, e33,
                      resamples=attempt, collected_max=biggest)
    # step 5: counts over the BFS tree
    counts = [[0, 0, 0] for _ in range(n)]
    for a, b in e23:
        counts[a if layer[a] == 2 else b][0] += 1
    for a, b in tilde:
        counts[a][1] += 1
    for a, b in fbad:
        counts[a][2] += 1
    tr, totals = convergecast_vector(counts, setup.tree, g, cfg)
    log.add("step5-counts", check_phase(tr, "step5 counts"))
    got23 = sum(1 for e in received if e in e23)
    got22 = sum(1 for e in received if e in e22)
    if got23 < totals[0] or got22 < totals[1]:
        st.rejections.append((setup.root, "condition1"))
    for a, b in e22 - tilde:
        for u, v in ((a, b), (b, a)):
            if v1[u] != v1[v]:
                st.rejections.append((u, "condition2"))
    for a, b in fbad:
        for u, v in ((a, b), (b, a)):
            if any(layer[w] == 2 and not v1[u] <= adj[w] for w in adj[u]):
                st.rejections.append((u, "condition3"))
    for a, b in e33:
        for u, v in ((a, b), (b, a)):
            if ctx.v2_of(u) != ctx.v2_of(v):
                st.rejections.append((u, "condition4"))
    st.edges_at_r = _known_at_root_step1(ctx, setup.root) | received
    return st


def p_collect(g: Graph, cfg: NetworkConfig, params: P5Params = P5Params()):
    """Run setup and the collect procedure on a diameter-3 graph.

    Returns ``(state, phase_log)``; ``state.rejections`` lists the nodes that
    rejected and under which condition.
    """
    log = PhaseLog()
    setup = setup_phase(g, cfg, log)
    if setup.diameter != 3:
        raise ValueError("collect procedure needs diameter 3")
    return _collect(g, cfg, params, log, setup), log


# ---------------------------------------------------------------------------
# detection of paths through hidden edges

class _Knowledge:
    """What node ``u`` can derive about pairs after a rejection-free collect."""

    def __init__(self, ctx: _Ctx, st: CollectState):
        self.ctx = ctx
        self.layer = st.layer
        self.fbad_partners: dict[int, set] = {}
        for a, b in st.fbad:
            self.fbad_partners.setdefault(a, set()).add(b)
            self.fbad_partners.setdefault(b, set()).add(a)
        self.e33_partners: dict[int, set] = {}
        for a, b in st.e33:
            self.e33_partners.setdefault(a, set()).add(b)
            self.e33_partners.setdefault(b, set()).add(a)

    def _derive(self, closed: frozenset, x: int, y: int, truth: bool) -> bool:
        """Can a node with closed neighbourhood ``closed`` derive whether x~y from facts about x?"""
        adj, layer = self.ctx.adj, self.layer
        if not truth and abs(layer[x] - layer[y]) >= 2:
            return True
        bad = [p for p in self.fbad_partners.get(x, ()) if p in closed]
        if bad:
            if layer[y] == 3 and not truth:
                return True                   # bad-edge endpoints have no far-layer neighbours
            if layer[y] == 1:
                return True                   # both endpoints share their first-layer neighbours
            if layer[y] == 2 and not truth:
                for p in bad:
                    for z in adj[p]:
                        if layer[z] == 1 and z in closed and y not in adj[z]:
                            return True       # every second-layer neighbour sees all of them
        if layer[y] == 2 and any(p in closed for p in self.e33_partners.get(x, ())):
            return True                       # far-layer edge endpoints share second-layer neighbours
        return False

    def certifies(self, u: int, path: Sequence[int]) -> bool:
        adj = self.ctx.adj
        closed = adj[u] | {u}
        for x, y in combinations(path, 2):
            if x in closed or y in closed:
                continue
            truth = y in adj[x]
            if not (self._derive(closed, x, y, truth) or self._derive(closed, y, x, truth)):
                return False
        return True


def detect_special_paths(g: Graph, st: CollectState):
    """Special induced P5s (a path edge hidden from r) and which ones some node certifies.

    Returns ``(detectors, undetected)``: the set of nodes reporting a path and
    the list of special paths nobody could certify.
    """
    ctx = _Ctx(g, st.layer)
    know = _Knowledge(ctx, st)
    paths = p5_through_edges(ctx.adj, sorted(st.hidden()))
    detectors: set[int] = set()
    undetected = []
    for path in sorted(paths):
        cands = sorted(set().union(*(ctx.adj[x] | {x} for x in path)))
        hit = next((u for u in cands if know.certifies(u, path)), None)
        if hit is None:
            undetected.append(path)
        else:
            detectors.add(hit)
    return detectors, undetected


# ---------------------------------------------------------------------------
# counting dangerous copies

def dangerous_copies(g: Graph, st: CollectState):
    """Walk r's P5s and assign each dangerous one to its designated counting node.

    Yields ``(path, node)`` for every P5 on r's edges; ``node`` is ``-1`` for a
    path using no hidden pair and ``None`` when no node could count it.
    """
    ctx = _Ctx(g, st.layer)
    adj = ctx.adj
    hidden = st.hidden()
    seen = [set() for _ in range(g.node_count)]
    for a, b in st.edges_at_r:
        seen[a].add(b)
        seen[b].add(a)
    for path in iter_p5(seen):
        if not any(_edge(x, y) in hidden for x, y in combinations(path, 2)):
            yield path, -1
            continue
        sub_deg = {x: sum(1 for y in path if y in adj[x]) for x in path}
        if all(d == 2 for d in sub_deg.values()):
            c1, c5 = path[0], path[-1]
            first = sorted(y for y in adj[c1] if st.layer[y] == 1)
            u = first[0] if first else None
            if u is None or not {c1, path[1], path[3], c5} <= adj[u]:
                yield path, None
            else:
                yield path, u
        else:
            yield path, min(v for v in path if sub_deg[v] >= 3)


def count_dangerous(g: Graph, st: CollectState):
    """Per-node counts of copies that induce a P5 only once hidden edges are dropped.

    Returns ``(per_node_counts, local_count, uncountable)`` where
    ``local_count`` is r's P5 count on the edges it holds.
    """
    per = [0] * g.node_count
    local = 0
    uncountable = []
    for path, who in dangerous_copies(g, st):
        local += 1
        if who is None:
            uncountable.append(path)
        elif who >= 0:
            per[who] += 1
    return per, local, uncountable


# ---------------------------------------------------------------------------
# driver

@dataclass
class P5Result:
    accept: bool | None
    branch: str
    reason: str
    rounds: int
    max_bits: int
    t: int | None = None
    local_count: int | None = None
    phases: list = field(default_factory=list)
    digest: str = ""
    state: CollectState | None = None
    undetected: int = 0
    uncountable: int = 0

    def to_json(self) -> dict:
        return {"decision": None if self.accept is None else ("accept" if self.accept else "reject"),
                "branch": self.branch, "reason": self.reason, "rounds": self.rounds,
                "max_bits": self.max_bits, "t": self.t, "local_count": self.local_count,
                "undetected": self.undetected, "uncountable": self.uncountable,
                "phases": self.phases}


def _result(log: PhaseLog, accept, branch, reason, **kw) -> P5Result:
    return P5Result(accept, branch, reason, log.rounds, log.max_bits,
                    phases=log.summary()["phases"], digest=log.digest(), **kw)


def is_sparse(n: int, m: int, c: float) -> bool:
    if n < 2:
        return True
    return m <= c * n * math.log(n) ** 2


def decide_p5_free(g: Graph, cfg: NetworkConfig, params: P5Params = P5Params()) -> P5Result:
    log = PhaseLog()
    setup = setup_phase(g, cfg, log)
    n = g.node_count
    if setup.diameter >= 4:
        return _result(log, False, "diam>=4", "diameter")
    sparse = is_sparse(n, setup.m, params.sparse_constant)
    if params.branch == "sparse":
        sparse = True
    elif params.branch == "dense":
        sparse = False
    if sparse:
        tokens = [[(("id", v), ("id", w)) for w in g.neighbors(v) if w > v] for v in range(n)]
        tr, got = upcast(tokens, setup.tree, g, cfg)
        log.add("sparse-upcast", check_phase(tr, "sparse upcast"))
        edges = {_edge(a, b) for a, b in got}
        ok = _local_verdict(g, edges, setup)
        return _result(log, ok, "sparse", "" if ok else "local-p5")
    try:
        if setup.diameter <= 2:
            edges, _, _ = _dense_diam2(g, cfg, params, log, setup)
            ok = _local_verdict(g, edges, setup)
            return _result(log, ok, "diam2", "" if ok else "local-p5")
        st = _collect(g, cfg, params, log, setup)
    except PartitionAbort:
        return _result(log, None, "diam2" if setup.diameter <= 2 else "diam3", "partition-abort")
    if st.rejections:
        return _result(log, False, "diam3", sorted({c for _, c in st.rejections})[0], state=st)
    detectors, undetected = detect_special_paths(g, st)
    if detectors:
        return _result(log, False, "diam3", "special-path", state=st, undetected=len(undetected))
    per, local, uncountable = count_dangerous(g, st)
    tr, t = convergecast_wide(per, setup.tree, g, cfg, bound_bits=5 * id_bits(n) + 1)
    log.add("dangerous-count", check_phase(tr, "dangerous count"))
    if local < t:
        raise AssertionError("dangerous copies exceed the local count")
    ok = local == t
    return _result(log, ok, "diam3", "" if ok else "count", t=t, local_count=local, state=st,
                   undetected=len(undetected), uncountable=len(uncountable))


def decide_p5_majority(g: Graph, cfg: NetworkConfig, params: P5Params = P5Params(),
                       runs: int = 3) -> tuple[bool, list[P5Result]]:
    results: list[P5Result] = []
    need = runs // 2 + 1
    for i in range(runs):
        results.append(decide_p5_free(g, cfg.derive(i), params))
        yes = sum(1 for r in results if r.accept)
        no = sum(1 for r in results if r.accept is False)
        if yes >= need or no >= need:
            break
    return sum(1 for r in results if r.accept) >= need, results
