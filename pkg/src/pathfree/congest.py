"""Synchronous CONGEST / broadcast-CONGEST simulator.

A run executes one :class:`NodeProgram` per node in lock-step rounds.  In
round ``r`` every live node receives the messages sent to it in round
``r - 1`` and returns its outbox for round ``r``.  Messages are sequences of
typed fields whose encoded length is checked against the per-edge bandwidth;
an oversized message aborts the run with a violation record.

The run ends when a round passes in which nothing was sent, nothing is in
flight and no program reports pending work.  ``rounds_used`` is the last
round in which a message was sent.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import math
import operator
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .graphcore import Graph, bfs_distances


class ConfigError(ValueError):
    """Invalid network configuration or an unencodable message field."""


class BandwidthViolation(RuntimeError):
    pass


def id_bits(n: int) -> int:
    """Bits needed for one node identifier, ``ceil(log2 n)`` (at least 1)."""
    return max(1, math.ceil(math.log2(max(n, 2))))


@dataclass(frozen=True)
class NetworkConfig:
    """Model parameters for one run.

    ``bandwidth_bits`` defaults to ``bandwidth_constant * ceil(log2 n)`` once
    the graph size is known.
    """
    bandwidth_bits: int | None = None
    bandwidth_constant: int = 4
    mode: str = "unicast"
    seed: int = 0
    round_limit: int = 1_000_000
    trace: bool = False

    def __post_init__(self):
        if self.mode not in ("unicast", "broadcast"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.round_limit < 1:
            raise ConfigError("round_limit must be positive")
        if self.bandwidth_constant < 1:
            raise ConfigError("bandwidth_constant must be positive")

    def bandwidth(self, n: int) -> int:
        b = self.bandwidth_bits if self.bandwidth_bits is not None else self.bandwidth_constant * id_bits(n)
        if b < id_bits(n):
            raise ConfigError(f"bandwidth {b} bits cannot carry a {id_bits(n)}-bit node id")
        return b

    def validate(self, n: int) -> None:
        self.bandwidth(n)

    def derive(self, tag: int) -> "NetworkConfig":
        """Same parameters, independent seed for a sub-phase or retry."""
        child = np.random.SeedSequence([self.seed & (2**64 - 1), tag]).generate_state(2, np.uint32)
        return replace(self, seed=int(child[0]) << 32 | int(child[1]))

    def with_mode(self, mode: str) -> "NetworkConfig":
        return replace(self, mode=mode)


class Message(tuple):
    """Field values plus their encoded bit length."""

    __slots__ = ()

    def __new__(cls, values: tuple, nbits: int):
        return super().__new__(cls, (values, nbits))

    @property
    def values(self) -> tuple:
        return tuple.__getitem__(self, 0)

    @property
    def bits(self) -> int:
        return tuple.__getitem__(self, 1)

    def __repr__(self):
        return f"Message({self.values!r}, bits={self.bits})"


class Encoder:
    """Builds messages for an ``n``-node network.

    Field specs: ``("id", v)``, ``("int", x, width)``, ``("bool", b)``.
    A bare int is treated as a node id.
    """

    def __init__(self, n: int):
        self.n = n
        self.id_width = id_bits(n)

    def __call__(self, *fields) -> Message:
        values = []
        nbits = 0
        for f in fields:
            if isinstance(f, tuple):
                kind = f[0]
                if kind == "id":
                    v = f[1]
                    if not 0 <= v < self.n:
                        raise ConfigError(f"node id {v} out of range")
                    nbits += self.id_width
                elif kind == "int":
                    v, width = f[1], f[2]
                    if v < 0 or v >= 1 << width:
                        raise ConfigError(f"value {v} does not fit {width} bits")
                    nbits += width
                elif kind == "bool":
                    v = bool(f[1])
                    nbits += 1
                else:
                    raise ConfigError(f"unknown field kind {kind!r}")
                values.append(v)
            else:
                if not 0 <= f < self.n:
                    raise ConfigError(f"node id {f} out of range")
                values.append(f)
                nbits += self.id_width
        return Message(tuple(values), nbits)


@dataclass
class LocalView:
    """What a node knows at start-up."""
    node: int
    neighbors: tuple[int, ...]
    n: int
    input: Any
    shared: "SharedRandomness"
    private: np.random.Generator
    encode: Encoder
    bandwidth: int
    mode: str


class SharedRandomness:
    """Public coins derived from the run seed; every node sees the same values."""

    def __init__(self, seed: int):
        self.seed = seed

    def generator(self, tag: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed & (2**64 - 1), 0x5EED, tag])

    def integers(self, tag: int, high: int, size: int) -> np.ndarray:
        return self.generator(tag).integers(0, high, size=size)


class NodeProgram:
    """Per-node behaviour.  Subclasses override the three callbacks.

    ``step`` returns ``None`` (silent), a :class:`Message` (sent to every
    neighbour; the only option in broadcast mode) or a ``{neighbor: Message}``
    dict (unicast only).  Setting ``self.halted`` stops further ``step`` calls.
    ``busy`` tells the runtime that a silent node still has work scheduled.
    """

    halted: bool = False

    def initialize(self, view: LocalView) -> None:
        self.view = view

    def step(self, rnd: int, inbox: dict[int, Message]):
        return None

    def busy(self) -> bool:
        return False

    def finalize(self) -> Any:
        return None


@dataclass
class Transcript:
    """Record of one run."""
    rounds_used: int = 0
    status: str = "ok"          # ok | timeout | violation
    bandwidth_bits: int = 0
    max_bits: int = 0
    messages: int = 0
    bits_total: int = 0
    per_round: list = field(default_factory=list)   # [round, messages, bits, max_bits]
    node_outputs: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    dump: list | None = None    # [round, sender, receiver, values, bits] when tracing

    def to_json(self, include_dump: bool = False) -> dict:
        out = {
            "rounds": self.rounds_used,
            "max_bits": self.max_bits,
            "outputs": _jsonable(self.node_outputs),
            "violations": self.violations,
            "status": self.status,
            "bandwidth_bits": self.bandwidth_bits,
            "messages": self.messages,
            "bits_total": self.bits_total,
            "per_round": self.per_round,
        }
        if include_dump and self.dump is not None:
            out["dump"] = _jsonable(self.dump)
        return out

    def dumps(self, include_dump: bool = True) -> str:
        return json.dumps(self.to_json(include_dump), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _jsonable(x):
    if isinstance(x, Message):
        return {"values": _jsonable(x.values), "bits": x.bits}
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


@dataclass
class RunTally:
    """Process-wide count of simulator runs and the bandwidth violations they hit."""
    runs: int = 0
    violations: list = field(default_factory=list)

    def reset(self) -> None:
        self.runs = 0
        self.violations.clear()


TALLY = RunTally()


def run(factory: Callable[[int], NodeProgram], g: Graph, cfg: NetworkConfig,
        inputs: Sequence[Any] | None = None) -> Transcript:
    """Execute ``factory(v)`` on every node of ``g`` until quiescence."""
    n = g.node_count
    bandwidth = cfg.bandwidth(n)
    enc = Encoder(n)
    shared = SharedRandomness(cfg.seed)
    broadcast = cfg.mode == "broadcast"
    adj = g.adjacency
    nbr_sets = [g.neighbor_set(v) for v in range(n)]
    programs = [factory(v) for v in range(n)]
    for v, p in enumerate(programs):
        priv = np.random.default_rng([cfg.seed & (2**64 - 1), 0xA11CE, v])
        p.initialize(LocalView(v, adj[v], n, None if inputs is None else inputs[v],
                               shared, priv, enc, bandwidth, cfg.mode))
    tr = Transcript(bandwidth_bits=bandwidth)
    if cfg.trace:
        tr.dump = []
    inbox: list[dict] = [{} for _ in range(n)]
    in_flight = False
    rnd = 0
    while True:
        rnd += 1
        if rnd > cfg.round_limit:
            tr.status = "timeout"
            break
        nxt: list[dict] = [{} for _ in range(n)]
        sent = 0
        bits_round = 0
        max_round = 0
        for v in range(n):
            p = programs[v]
            if p.halted:
                continue
            out = p.step(rnd, inbox[v])
            if out is None:
                continue
            if isinstance(out, Message):
                b = out.bits
                if b > bandwidth:
                    tr.violations.append({"round": rnd, "sender": v, "receiver": -1,
                                          "bits": b, "limit": bandwidth})
                    tr.status = "violation"
                    break
                for w in adj[v]:
                    nxt[w][v] = out
                k = len(adj[v])
                if k:
                    sent += k
                    bits_round += k * b
                    if b > max_round:
                        max_round = b
                    if tr.dump is not None:
                        tr.dump.append([rnd, v, -1, out.values, b])
            else:
                if broadcast and len(set(out.values())) > 1:
                    tr.violations.append({"round": rnd, "sender": v, "receiver": -1,
                                          "bits": 0, "limit": bandwidth,
                                          "reason": "distinct messages in broadcast mode"})
                    tr.status = "violation"
                    break
                for w in sorted(out):
                    m = out[w]
                    if w not in nbr_sets[v]:
                        raise ValueError(f"node {v} addressed non-neighbour {w}")
                    b = m.bits
                    if b > bandwidth:
                        tr.violations.append({"round": rnd, "sender": v, "receiver": w,
                                              "bits": b, "limit": bandwidth})
                        tr.status = "violation"
                        break
                    nxt[w][v] = m
                    sent += 1
                    bits_round += b
                    if b > max_round:
                        max_round = b
                    if tr.dump is not None:
                        tr.dump.append([rnd, v, w, m.values, b])
                if tr.status == "violation":
                    break
        if tr.status == "violation":
            break
        if sent:
            tr.rounds_used = rnd
            tr.messages += sent
            tr.bits_total += bits_round
            tr.max_bits = max(tr.max_bits, max_round)
            tr.per_round.append([rnd, sent, bits_round, max_round])
        elif not in_flight and not any(not p.halted and p.busy() for p in programs):
            break
        in_flight = sent > 0
        inbox = nxt
    tr.node_outputs = [p.finalize() for p in programs]
    TALLY.runs += 1
    TALLY.violations.extend(tr.violations)
    return tr


# ---------------------------------------------------------------------------
# multi-phase accounting

@dataclass
class PhaseLog:
    """Additive round accounting across the phases of one algorithm run."""
    phases: list = field(default_factory=list)   # (name, Transcript)

    def add(self, name: str, tr: Transcript) -> Transcript:
        self.phases.append((name, tr))
        return tr

    def charge(self, name: str, rounds: int) -> None:
        """Rounds spent without simulated traffic (e.g. a known wait)."""
        self.phases.append((name, Transcript(rounds_used=rounds)))

    @property
    def rounds(self) -> int:
        return sum(t.rounds_used for _, t in self.phases)

    @property
    def max_bits(self) -> int:
        return max((t.max_bits for _, t in self.phases), default=0)

    @property
    def violations(self) -> list:
        return [dict(v, phase=name) for name, t in self.phases for v in t.violations]

    @property
    def status(self) -> str:
        for _, t in self.phases:
            if t.status != "ok":
                return t.status
        return "ok"

    def summary(self) -> dict:
        return {
            "rounds": self.rounds,
            "max_bits": self.max_bits,
            "violations": self.violations,
            "status": self.status,
            "phases": [[name, t.rounds_used] for name, t in self.phases],
        }

    def digest(self) -> str:
        h = hashlib.sha256()
        for name, t in self.phases:
            h.update(name.encode())
            h.update(t.dumps().encode())
        return h.hexdigest()


def check_phase(tr: Transcript, what: str) -> Transcript:
    if tr.status == "violation":
        raise BandwidthViolation(f"{what}: {tr.violations[0]}")
    if tr.status == "timeout":
        raise TimeoutError(f"{what}: round limit reached")
    return tr


# ---------------------------------------------------------------------------
# basic programs

class Echo(NodeProgram):
    """Every node sends its own id once."""

    def initialize(self, view):
        super().initialize(view)
        self.heard = []

    def step(self, rnd, inbox):
        self.heard.extend(sorted(inbox))
        if rnd == 1:
            return self.view.encode(("id", self.view.node))
        self.halted = True
        return None

    def finalize(self):
        return self.heard


class NeighborExchange(NodeProgram):
    """Each node streams its neighbour list, one id per round, to all neighbours.

    Output: ``{neighbour: sorted neighbour list of that neighbour}``.
    """

    def initialize(self, view):
        super().initialize(view)
        self.queue = list(view.neighbors)
        self.got = {w: [] for w in view.neighbors}

    def step(self, rnd, inbox):
        for w, m in inbox.items():
            self.got[w].append(m.values[0])
        if rnd <= len(self.queue):
            return self.view.encode(("id", self.queue[rnd - 1]))
        return None

    def finalize(self):
        return {w: tuple(sorted(ids)) for w, ids in self.got.items()}


def neighbor_exchange(g: Graph, cfg: NetworkConfig) -> Transcript:
    return run(lambda v: NeighborExchange(), g, cfg)


class TokenFlood(NodeProgram):
    """Flooding with per-edge pipelining.

    Input: list of tokens, each a tuple of field specs (see :class:`Encoder`).
    Every node forwards, once per round, the smallest ``(origin, index)`` token
    it holds but has not yet forwarded; relayed tokens are forwarded verbatim.
    Output: ``{(origin, index): values}``.
    """

    def initialize(self, view):
        super().initialize(view)
        tokens, self.index_bits = view.input
        self.known: dict = {}
        self.pending: list = []
        enc = view.encode
        for i, tok in enumerate(tokens):
            key = (view.node, i)
            self.known[key] = enc(("id", view.node), ("int", i, self.index_bits), *tok)
            heapq.heappush(self.pending, key)

    def step(self, rnd, inbox):
        for m in inbox.values():
            key = (m.values[0], m.values[1])
            if key not in self.known:
                self.known[key] = m
                heapq.heappush(self.pending, key)
        if not self.pending:
            return None
        return self.known[heapq.heappop(self.pending)]

    def busy(self):
        return bool(self.pending)

    def finalize(self):
        return {key: m.values[2:] for key, m in self.known.items()}


def pipeline_broadcast(items: Sequence[Sequence[tuple]], g: Graph, cfg: NetworkConfig,
                       index_bits: int | None = None):
    """Every node learns every ``(origin, index, token)``.

    ``items[v]`` is node ``v``'s list of tokens; a token is a tuple of field
    specs.  Returns ``(transcript, knowledge)`` where ``knowledge[v]`` maps
    ``(origin, index)`` to the token's plain values.  Rounds are at most the
    diameter plus the total number of tokens.
    """
    total = max((len(it) for it in items), default=0)
    ib = index_bits if index_bits is not None else max(0, (total - 1).bit_length())
    tr = run(lambda v: TokenFlood(), g, cfg, inputs=[(list(it), ib) for it in items])
    return tr, tr.node_outputs


# ---------------------------------------------------------------------------
# trees

@dataclass(frozen=True)
class RootedTree:
    root: int
    parent: tuple[int, ...]      # parent[root] == -1
    depth: tuple[int, ...]

    @property
    def height(self) -> int:
        return max(self.depth)

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(v)
        return ch


def bfs_tree(g: Graph, root: int) -> RootedTree:
    """Exact shortest-path tree; each node's parent is its smallest-id neighbour one level up."""
    dist = bfs_distances(g, root)
    if min(dist) < 0:
        raise ValueError("graph is disconnected")
    parent = [-1] * g.node_count
    for v in g.nodes():
        if v != root:
            parent[v] = min(w for w in g.neighbors(v) if dist[w] == dist[v] - 1)
    return RootedTree(root, tuple(parent), tuple(dist))


class BfsBuild(NodeProgram):
    """Distributed BFS from a known root; parents are smallest-id first senders."""

    def initialize(self, view):
        super().initialize(view)
        self.root = view.input
        self.dist = 0 if view.node == self.root else -1
        self.parent = -1
        self.announced = False

    def step(self, rnd, inbox):
        if self.dist < 0 and inbox:
            senders = [w for w, m in inbox.items() if m.values[0] == 0]
            if senders:
                self.parent = min(senders)
                self.dist = inbox[self.parent].values[1] + 1
        if self.dist >= 0 and not self.announced:
            self.announced = True
            self.halted = True
            return self.view.encode(("int", 0, 1), ("int", self.dist, self.view.encode.id_width))
        return None

    def busy(self):
        return self.dist >= 0 and not self.announced

    def finalize(self):
        return (self.parent, self.dist)


def distributed_bfs(g: Graph, root: int, cfg: NetworkConfig) -> tuple[Transcript, RootedTree]:
    tr = run(lambda v: BfsBuild(), g, cfg, inputs=[root] * g.node_count)
    par = tuple(o[0] for o in tr.node_outputs)
    dep = tuple(o[1] for o in tr.node_outputs)
    return tr, RootedTree(root, par, dep)


class Convergecast(NodeProgram):
    """Pipelined aggregation of a vector of values towards the root of a tree.

    Input: ``(parent, child_count, values, op, value_bits)``.  Component ``i``
    leaves a node once all children have delivered their component ``i``; one
    component per round per edge.
    """

    def initialize(self, view):
        super().initialize(view)
        self.parent, kids, values, self.op, self.value_bits = view.input
        self.k = len(values)
        self.acc = list(values)
        self.waiting = [kids] * self.k
        self.next = 0
        self.ib = id_bits(max(self.k, 2))

    def step(self, rnd, inbox):
        for m in inbox.values():
            i, val = m.values
            self.acc[i] = self.op(self.acc[i], val)
            self.waiting[i] -= 1
        if not self.busy():
            return None
        i = self.next
        self.next += 1
        return {self.parent: self.view.encode(("int", i, self.ib), ("int", self.acc[i], self.value_bits))}

    def busy(self):
        return self.parent >= 0 and self.next < self.k and not self.waiting[self.next]

    def finalize(self):
        return tuple(self.acc)


def convergecast_vector(values: Sequence[Sequence[int]], tree: RootedTree, g: Graph,
                        cfg: NetworkConfig, op: Callable[[int, int], int] = operator.add
                        ) -> tuple[Transcript, tuple[int, ...]]:
    """Root learns the component-wise aggregate; rounds <= height + len - 1."""
    n = g.node_count
    k = len(values[0]) if n else 0
    width = cfg.bandwidth(n) - id_bits(max(k, 2))
    total = [sum(col) for col in zip(*values)] if n else []
    if any(x < 0 for col in values for x in col) or any(t >= 1 << width for t in total):
        raise ConfigError(f"aggregated values must be non-negative and below 2^{width}")
    ch = tree.children()
    inputs = [(tree.parent[v], len(ch[v]), list(values[v]), op, width) for v in range(n)]
    tr = run(lambda v: Convergecast(), g, cfg.with_mode("unicast"), inputs=inputs)
    return tr, tr.node_outputs[tree.root]


def convergecast_sum(values: Sequence[int], tree: RootedTree, g: Graph,
                     cfg: NetworkConfig) -> tuple[Transcript, int]:
    """Root learns ``sum(values)`` in at most ``tree.height`` rounds."""
    tr, out = convergecast_vector([[v] for v in values], tree, g, cfg)
    return tr, out[0]


def convergecast_max(values: Sequence[int], tree: RootedTree, g: Graph,
                     cfg: NetworkConfig) -> tuple[Transcript, int]:
    tr, out = convergecast_vector([[v] for v in values], tree, g, cfg, op=max)
    return tr, out[0]


class Upcast(NodeProgram):
    """Pipelined collection of messages at the root of a tree.

    Input: ``(parent, tokens)`` with tokens as field-spec tuples.  Every node
    forwards one queued message per round to its parent, verbatim.
    """

    def initialize(self, view):
        super().initialize(view)
        self.parent, toks = view.input
        self.queue = [view.encode(*t) for t in toks]
        self.head = 0

    def step(self, rnd, inbox):
        for w in sorted(inbox):
            self.queue.append(inbox[w])
        if self.parent < 0 or self.head >= len(self.queue):
            return None
        m = self.queue[self.head]
        self.head += 1
        return {self.parent: m}

    def busy(self):
        return self.parent >= 0 and self.head < len(self.queue)

    def finalize(self):
        return [m.values for m in self.queue] if self.parent < 0 else None


def upcast(tokens: Sequence[Sequence[tuple]], tree: RootedTree, g: Graph,
           cfg: NetworkConfig) -> tuple[Transcript, list]:
    """Root collects every token; rounds <= height + number of tokens."""
    inputs = [(tree.parent[v], list(tokens[v])) for v in range(g.node_count)]
    tr = run(lambda v: Upcast(), g, cfg.with_mode("unicast"), inputs=inputs)
    return tr, tr.node_outputs[tree.root]


class Downcast(NodeProgram):
    """Root streams messages down a tree; every node keeps all of them."""

    def initialize(self, view):
        super().initialize(view)
        self.parent, self.kids, toks = view.input
        self.queue = [view.encode(*t) for t in toks]
        self.head = 0

    def step(self, rnd, inbox):
        if self.parent in inbox:
            self.queue.append(inbox[self.parent])
        if self.busy():
            m = self.queue[self.head]
            self.head += 1
            return {c: m for c in self.kids}
        return None

    def busy(self):
        return bool(self.kids) and self.head < len(self.queue)

    def finalize(self):
        return [m.values for m in self.queue]


def downcast(tokens: Sequence[tuple], tree: RootedTree, g: Graph,
             cfg: NetworkConfig) -> tuple[Transcript, list]:
    """Every node receives the root's token list; rounds <= height + len(tokens)."""
    ch = tree.children()
    inputs = [(tree.parent[v], ch[v], list(tokens) if v == tree.root else [])
              for v in range(g.node_count)]
    tr = run(lambda v: Downcast(), g, cfg.with_mode("unicast"), inputs=inputs)
    return tr, tr.node_outputs


# ---------------------------------------------------------------------------
# diameter

class AllSourcesBfs(NodeProgram):
    """All-pairs distances by pipelined BFS waves.

    Each round a node broadcasts the smallest ``(distance, source)`` entry it
    has not yet sent; an improved entry is queued again.  Output: the node's
    distance vector.
    """

    def initialize(self, view):
        super().initialize(view)
        self.best = {view.node: 0}
        self.queue = [(0, view.node)]

    def step(self, rnd, inbox):
        for m in inbox.values():
            src, d = m.values
            d += 1
            if d < self.best.get(src, 1 << 60):
                self.best[src] = d
                heapq.heappush(self.queue, (d, src))
        while self.queue:
            d, src = heapq.heappop(self.queue)
            if self.best[src] == d:
                enc = self.view.encode
                return enc(("id", src), ("int", d, enc.id_width))
        return None

    def busy(self):
        return bool(self.queue)

    def finalize(self):
        return self.best


def distributed_diameter(g: Graph, cfg: NetworkConfig):
    """Exact diameter from all-sources BFS; :data:`math.inf` if disconnected.

    Returns ``(diameter, phase_log, distance_rows)``.  The maximum is gathered
    at the smallest id along a BFS tree (height <= diameter rounds).
    """
    log = PhaseLog()
    tr = log.add("all-sources-bfs", run(lambda v: AllSourcesBfs(), g, cfg.with_mode("broadcast")))
    check_phase(tr, "diameter")
    rows = tr.node_outputs
    n = g.node_count
    if any(len(r) < n for r in rows):
        return math.inf, log, rows
    ecc = [max(r.values()) for r in rows]
    tree = bfs_tree(g, 0)
    t2, diam = convergecast_max(ecc, tree, g, cfg)
    log.add("gather-max", t2)
    return diam, log, rows


def convergecast_wide(values: Sequence[int], tree: RootedTree, g: Graph,
                      cfg: NetworkConfig, bound_bits: int) -> tuple[Transcript, int]:
    """Sum of large non-negative values, split into message-sized digits.

    ``bound_bits`` is a publicly known bound on the bit length of every
    value.  Digits are summed position-wise (with headroom for n carries)
    and recombined at the root.
    """
    n = g.node_count
    width = cfg.bandwidth(n) - 2 * id_bits(max(n, 2)) - 1
    if width < 1:
        raise ConfigError("bandwidth too small for a wide convergecast")
    if any(v < 0 or v.bit_length() > bound_bits for v in values):
        raise ConfigError(f"value outside the declared {bound_bits}-bit bound")
    digits = max(1, -(-bound_bits // width))
    mask = (1 << width) - 1
    rows = [[(v >> (i * width)) & mask for i in range(digits)] for v in values]
    tr, sums = convergecast_vector(rows, tree, g, cfg)
    return tr, sum(s << (i * width) for i, s in enumerate(sums))
