"""Induced 4-cycle detection under a quantum round-cost model.

Nothing quantum is executed.  The message-passing steps (neighbour-list
broadcasts, ID buckets, token pulls) are carried out on the graph, ground
truth for every search is computed exhaustively, and the rounds a distributed
quantum search or amplitude amplification would need are charged through
:class:`QuantumCostModel`.  Searches that run in parallel over all edges of a
phase are charged as the maximum over those edges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .graphcore import Graph, ParameterError, bfs_distances, random_gnp

VARIANTS = ("naive", "amplified", "bucketed")


@dataclass
class QuantumCostModel:
    """Charged-round formulas with an explicit constant and polylog policy.

    ``search(size, t)`` = ceil(c_q * sqrt(size)) * t * ceil(log2 n)^e and
    ``amplify(eps, t, d)`` = ceil(c_q / sqrt(eps)) * (d + t) * ceil(log2(1/p_fail))^e.
    """
    search_constant: float = 2.0
    log_exponent: int = 1
    failure_prob: float = 1 / 3
    ledger: dict[str, int] = field(default_factory=dict)

    def fresh(self) -> "QuantumCostModel":
        return replace(self, ledger={})

    def polylog(self, n: int) -> int:
        return max(1, math.ceil(math.log2(max(n, 2)))) ** self.log_exponent

    def search(self, size: int, t: int, n: int) -> int:
        if size <= 0:
            return 0
        return math.ceil(self.search_constant * math.sqrt(size)) * t * self.polylog(n)

    def amplify(self, eps: float, t: int, d: int) -> int:
        if not 0 < eps <= 1:
            raise ParameterError("success probability must lie in (0, 1]")
        reps = math.ceil(self.search_constant / math.sqrt(eps))
        boost = max(1, math.ceil(math.log2(1 / self.failure_prob))) ** self.log_exponent
        return reps * (d + t) * boost

    def charge(self, phase: str, rounds: int) -> int:
        self.ledger[phase] = self.ledger.get(phase, 0) + int(rounds)
        return int(rounds)

    @property
    def total(self) -> int:
        return sum(self.ledger.values())


@dataclass(frozen=True)
class DegreeClass:
    threshold: int
    light: frozenset[int]
    heavy: frozenset[int]


def degree_classes(g: Graph, threshold: int) -> DegreeClass:
    light = frozenset(v for v in g.nodes() if g.degree(v) <= threshold)
    return DegreeClass(threshold, light, frozenset(g.nodes()) - light)


@dataclass
class C4Result:
    found: bool
    witness: tuple[int, int, int, int] | None
    rounds: dict[str, int]
    delta: int
    variant: str = "bucketed"
    id_retries: int = 0
    bucket_overflow: bool = False
    trial_success_rate: float | None = None

    @property
    def charged_rounds(self) -> int:
        return sum(self.rounds.values())

    def to_json(self) -> dict:
        return {"found": self.found, "witness": list(self.witness) if self.witness else None,
                "charged_rounds": dict(self.rounds), "total_rounds": self.charged_rounds,
                "delta": self.delta, "variant": self.variant, "id_retries": self.id_retries,
                "bucket_overflow": self.bucket_overflow,
                "trial_success_rate": self.trial_success_rate}


def is_induced_c4(g: Graph, cyc) -> bool:
    a, b, c, d = cyc
    if len({a, b, c, d}) != 4:
        return False
    ring = g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(c, d) and g.has_edge(d, a)
    return ring and not g.has_edge(a, c) and not g.has_edge(b, d)


def delta_for(n: int, policy="sqrt") -> int:
    """Degree threshold; ``policy`` is ``"sqrt"`` (ceil sqrt n) or a positive int."""
    if policy == "sqrt":
        return max(1, math.isqrt(max(n - 1, 0)) + 1 if n > 1 else 1)
    d = int(policy)
    if d < 1:
        raise ParameterError("delta must be positive")
    return d


def measured_diameter(g: Graph, exact_limit: int = 2048, sweeps: int = 4) -> int:
    """Largest eccentricity inside any component.

    Exact up to ``exact_limit`` nodes; above that, the best of a few double
    sweeps (a lower bound that is tight on random sparse graphs in practice).
    """
    n = g.node_count
    if n == 0:
        return 0
    if n <= exact_limit:
        return max(max(bfs_distances(g, s)) for s in g.nodes())
    best = 0
    start = 0
    for _ in range(sweeps):
        d = bfs_distances(g, start)
        far = max(range(n), key=lambda v: d[v])
        d2 = bfs_distances(g, far)
        best = max(best, max(d[far], max(d2)))
        start = max(range(n), key=lambda v: d2[v])
    return best


# ---------------------------------------------------------------------------
# light cycles

def light_set_formula(g: Graph, v: int, w: int, delta: int) -> set[int]:
    """Central evaluation: {w' | some light u in N(v) \\ N[w] has w' in N(u) \\ N[v]}."""
    nv = g.neighbor_set(v)
    out: set[int] = set()
    for u in nv:
        if u == w or g.has_edge(u, w) or g.degree(u) > delta:
            continue
        out |= {x for x in g.neighbor_set(u) if x != v and x not in nv}
    return out


def _broadcast_light_lists(g: Graph, light) -> tuple[list[dict[int, frozenset[int]]], int]:
    # every light node streams its neighbour list, one id per round
    inbox: list[dict[int, frozenset[int]]] = [dict() for _ in g.nodes()]
    rounds = 0
    for u in light:
        lst = g.neighbors(u)
        rounds = max(rounds, len(lst))
        for v in lst:
            inbox[v][u] = frozenset(lst)
    return inbox, rounds


def _local_light_set(g: Graph, v: int, w: int, inbox) -> set[int]:
    # v only knows its own adjacency and the lists it received
    nv = g.neighbor_set(v)
    out: set[int] = set()
    for u, lst in inbox[v].items():
        if u == w or w in lst:
            continue
        out |= {x for x in lst if x != v and x not in nv}
    return out


def detect_light_c4(g: Graph, delta: int, cost: QuantumCostModel) -> C4Result:
    classes = degree_classes(g, delta)
    inbox, used = _broadcast_light_lists(g, classes.light)
    assert used <= delta
    n = g.node_count
    cost.charge("light-broadcast", delta if classes.light and g.edge_count else 0)
    worst = 0
    witness = None
    for v in g.nodes():
        for w in g.neighbors(v):
            s = _local_light_set(g, v, w, inbox)
            if not s:
                continue
            nw = g.neighbor_set(w)
            worst = max(worst, cost.search(min(len(s), len(nw)), 1, n))
            if witness is None:
                hit = s & nw
                if hit:
                    x = min(hit)
                    u = min(u for u, lst in inbox[v].items()
                            if x in lst and u != w and w not in lst)
                    witness = (v, u, x, w)
    cost.charge("light-search", worst)
    if witness is not None and not is_induced_c4(g, witness):
        raise AssertionError(f"light witness {witness} is not an induced 4-cycle")
    return C4Result(witness is not None, witness, dict(cost.ledger), delta)


# ---------------------------------------------------------------------------
# heavy cycles

def heavy_set_formula(g: Graph, u: int, v: int, allowed=None) -> set[int]:
    """Central evaluation of {x in N(u) | some w not in N[u] has (v,w), (w,x) in E}, minus N[v].

    ``allowed`` restricts w (the nodes whose edges reached u).
    """
    nu, nv = g.neighbor_set(u), g.neighbor_set(v)
    out: set[int] = set()
    for w in nv:
        if w == u or w in nu or (allowed is not None and w not in allowed):
            continue
        out |= {x for x in g.neighbor_set(w) if x in nu and x != v and x not in nv}
    return out


def _token_set(g: Graph, u: int, v: int, tokens: dict[int, frozenset[int]]) -> set[int]:
    # tokens[y] = part of N(y) that neighbour y sent to u
    nu, nv = g.neighbor_set(u), g.neighbor_set(v)
    mids = {w for w in tokens.get(v, ()) if w != u and w not in nu}
    return {x for x, tok in tokens.items()
            if x != v and x not in nv and mids & tok}


def _draw_ids(g: Graph, delta: int, rng, bucket_constant: float, retries: int):
    cap = bucket_constant * max(1.0, g.node_count / delta)
    for attempt in range(retries + 1):
        ids = rng.integers(1, delta + 1, size=g.node_count)
        buckets = [dict() for _ in g.nodes()]
        worst = 0
        for y in g.nodes():
            b: dict[int, set[int]] = {}
            for z in g.neighbors(y):
                b.setdefault(int(ids[z]), set()).add(z)
            buckets[y] = {i: frozenset(s) for i, s in b.items()}
            worst = max(worst, max((len(s) for s in b.values()), default=0))
        if worst <= cap:
            return ids, buckets, attempt, False
    return ids, buckets, retries, True


def _heavy_trial_cost(g: Graph, delta: int, cost: QuantumCostModel, variant: str) -> int:
    n = g.node_count
    transfer = math.ceil(n / delta)
    check = cost.search(n, 1, n)          # f_v^u is a predicate on V
    return transfer + check + (1 if variant == "bucketed" else 0)


def detect_heavy_c4(g: Graph, delta: int, cost: QuantumCostModel, rng=None,
                    variant: str = "bucketed", bucket_constant: float = 3.0,
                    retries: int = 3, diameter: int | None = None) -> C4Result:
    """Heavy phase: token pulls, per-edge searches, and an outer repetition.

    Success of the outer repetition is modelled as certain whenever some
    sampling outcome exposes a cycle; ``trial_success_rate`` reports the
    measured fraction of single trials that do, at the witness node.
    """
    if delta < 1:
        raise ParameterError("delta must be at least 1")
    if variant not in VARIANTS:
        raise ParameterError(f"variant must be one of {VARIANTS}")
    rng = np.random.default_rng(rng)
    n = g.node_count
    d = measured_diameter(g) if diameter is None else diameter
    trial = _heavy_trial_cost(g, delta, cost, variant)
    if variant == "naive":
        cost.charge("heavy-repetition", math.ceil(cost.search_constant * delta * delta) * trial)
    elif variant == "amplified":
        cost.charge("heavy-amplification", cost.amplify(1 / (delta * delta), trial, d))
    else:
        cost.charge("heavy-amplification", cost.amplify(1 / delta, trial, d))

    retries_used, overflow = 0, False
    witness, rate = None, None
    if variant == "bucketed":
        ids, buckets, retries_used, overflow = _draw_ids(g, delta, rng, bucket_constant, retries)
        for u in g.nodes():
            nu = g.neighbor_set(u)
            # only buckets holding some distance-2 node can expose a cycle at u
            labels = sorted({int(ids[w]) for v in nu for w in g.neighbors(v)
                             if w != u and w not in nu})
            hits = 0
            for i in labels:
                tokens = {y: buckets[y].get(i, frozenset()) for y in nu}
                for v in nu:
                    xs = _token_set(g, u, v, tokens)
                    if xs:
                        hits += 1
                        if witness is None:
                            x = min(xs)
                            w = min(w for w in tokens[v] & tokens[x] if w != u and w not in nu)
                            witness = (u, v, w, x)
                        break
            if witness is not None:
                rate = hits / delta
                break
    else:
        per = max(1, math.ceil(n / delta))
        for u in g.nodes():
            nu = g.neighbor_set(u)
            if witness is None:
                full = {y: g.neighbor_set(y) for y in nu}
                for v in nu:
                    xs = _token_set(g, u, v, full)
                    if xs:
                        x = min(xs)
                        w = min(w for w in full[v] & full[x] if w != u and w not in nu)
                        witness = (u, v, w, x)
                        break
            if witness is not None:
                hits = 0
                for _ in range(32):
                    tokens = {}
                    for y in nu:
                        nb = list(g.neighbors(y))
                        pick = nb if len(nb) <= per else list(rng.choice(nb, per, replace=False))
                        tokens[y] = frozenset(int(z) for z in pick)
                    hits += bool(_token_set(g, u, witness[1], tokens))
                rate = hits / 32
                break
    if witness is not None and not is_induced_c4(g, witness):
        raise AssertionError(f"heavy witness {witness} is not an induced 4-cycle")
    return C4Result(witness is not None, witness, dict(cost.ledger), delta, variant,
                    retries_used, overflow, rate)


# ---------------------------------------------------------------------------
# full algorithm

def detect_induced_c4(g: Graph, cost: QuantumCostModel | None = None, seed=0,
                      variant: str = "bucketed", delta_policy="sqrt") -> C4Result:
    """Light phase then heavy phase with delta = ceil(sqrt n) by default."""
    cost = (cost or QuantumCostModel()).fresh()
    delta = delta_for(g.node_count, delta_policy)
    light = detect_light_c4(g, delta, cost)
    heavy = detect_heavy_c4(g, delta, cost, seed, variant)
    found = light.found or heavy.found
    return C4Result(found, light.witness or heavy.witness, dict(cost.ledger), delta, variant,
                    heavy.id_retries, heavy.bucket_overflow, heavy.trial_success_rate)


def majority_detect(g: Graph, runs: int = 3, seed: int = 0, **kw) -> bool:
    votes = sum(detect_induced_c4(g, seed=seed + r, **kw).found for r in range(runs))
    return 2 * votes > runs


@dataclass
class ExponentFit:
    sizes: list[int]
    rounds: list[int]
    slope: float
    intercept: float

    def to_json(self) -> dict:
        return {"sizes": self.sizes, "rounds": self.rounds,
                "exponent": self.slope, "intercept": self.intercept}


def charged_rounds_only(g: Graph, cost: QuantumCostModel, variant: str = "bucketed",
                        delta_policy="sqrt") -> dict[str, int]:
    """The phase charges of :func:`detect_induced_c4` without running detection."""
    cost = cost.fresh()
    n = g.node_count
    delta = delta_for(n, delta_policy)
    classes = degree_classes(g, delta)
    inbox, _ = _broadcast_light_lists(g, classes.light)
    cost.charge("light-broadcast", delta if classes.light and g.edge_count else 0)
    worst = 0
    for v in g.nodes():
        for w in g.neighbors(v):
            s = _local_light_set(g, v, w, inbox)
            if s:
                worst = max(worst, cost.search(min(len(s), g.degree(w)), 1, n))
    cost.charge("light-search", worst)
    d = measured_diameter(g)
    trial = _heavy_trial_cost(g, delta, cost, variant)
    if variant == "naive":
        cost.charge("heavy-repetition", math.ceil(cost.search_constant * delta * delta) * trial)
    elif variant == "amplified":
        cost.charge("heavy-amplification", cost.amplify(1 / (delta * delta), trial, d))
    else:
        cost.charge("heavy-amplification", cost.amplify(1 / delta, trial, d))
    return dict(cost.ledger)


def exponent_sweep(sizes=tuple(2 ** k for k in range(8, 15)), avg_degree: float = 8.0,
                   seed: int = 0, variant: str = "bucketed",
                   cost: QuantumCostModel | None = None) -> ExponentFit:
    """Least-squares slope of log(charged rounds) against log(n) on G(n, avg/n)."""
    cost = cost or QuantumCostModel()
    rounds = []
    for n in sizes:
        g = random_gnp(n, min(1.0, avg_degree / n), seed + n)
        rounds.append(sum(charged_rounds_only(g, cost, variant).values()))
    slope, icpt = np.polyfit(np.log(np.array(sizes, float)), np.log(np.array(rounds, float)), 1)
    return ExponentFit(list(sizes), rounds, float(slope), float(icpt))


# ---------------------------------------------------------------------------
# ordered 3-path reduction

@dataclass
class OrderedP3Instance:
    graph: Graph            # colored induced subgraph
    nodes: list[int]        # original ids, index-aligned with graph
    center: int


def ordered_p3_reduction(g: Graph, u: int, rng=None) -> OrderedP3Instance:
    """G[N(u) + M(u)] with M(u) (distance 2) colored 2 and N(u) colored 1 or 3 at random."""
    if not 0 <= u < g.node_count:
        raise ParameterError("u outside the graph")
    rng = np.random.default_rng(rng)
    dist = bfs_distances(g, u)
    near = [v for v in g.nodes() if dist[v] == 1]
    far = [v for v in g.nodes() if dist[v] == 2]
    nodes = near + far
    colors = [int(rng.choice((1, 3))) for _ in near] + [2] * len(far)
    return OrderedP3Instance(g.induced(nodes).with_colors(colors), nodes, u)


def has_ordered_p3(inst: OrderedP3Instance) -> bool:
    """Direct scan for p1 - p2 - p3 with colors 1, 2, 3 and p1, p3 non-adjacent."""
    h = inst.graph
    col = h.colors
    for p2 in h.nodes():
        if col[p2] != 2:
            continue
        ones = [a for a in h.neighbors(p2) if col[a] == 1]
        threes = [c for c in h.neighbors(p2) if col[c] == 3]
        for a in ones:
            if any(not h.has_edge(a, c) for c in threes):
                return True
    return False
