"""Randomised broadcast-CONGEST test for P4-freeness on connected graphs.

Schedule (all messages are broadcasts):

* rounds 1-4: flood the minimum id and the maximum ``(degree, -id)`` pair.
  A node whose 2-hop minimum disagrees with a neighbour's rejects, since a
  connected cograph has diameter at most 2.  After four rounds everybody
  knows the max-degree node ``r`` (the 2-hop check bounds the diameter by 4).
* round 5: ``r`` announces itself; rejects everywhere if ``deg(r) < n/2``.
* round 6: neighbours of ``r`` announce depth 1.
* round 7: every other node picks a uniformly random depth-1 neighbour as
  its parent (or rejects if it has none).
* rounds 8+: each node's adjacency sketch travels to ``r`` through the
  depth-2 tree; a depth-1 node with too many children rejects.

``r`` then plays referee: it merges twin classes using only the sketches
and accepts iff a single class survives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .congest import NetworkConfig, NodeProgram, Transcript, check_phase, id_bits, run
from .graphcore import Graph


def is_probable_prime(k: int) -> bool:
    """Deterministic Miller-Rabin for k < 3.3e24."""
    if k < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if k % q == 0:
            return k == q
    d, s = k - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, k)
        if x in (1, k - 1):
            continue
        for _ in range(s - 1):
            x = x * x % k
            if x == k - 1:
                break
        else:
            return False
    return True


def next_prime(x: int) -> int:
    while not is_probable_prime(x):
        x += 1
    return x


FINGERPRINT_FLOOR_BITS = 40


def fingerprint_modulus(n: int) -> int:
    """Smallest prime >= max(n^3, 2^40); the floor keeps small instances collision-free in practice."""
    return next_prime(max(n ** 3, 1 << FINGERPRINT_FLOOR_BITS))


def fanout_cap(n: int, beta: float = 3.0) -> int:
    """Children allowed per depth-1 node: ``beta * ln n / ln ln n`` (all of n when tiny)."""
    if n < 16:
        return n
    return math.ceil(beta * math.log(n) / math.log(math.log(n)))


@dataclass
class Depth2Tree:
    root: int
    parent: dict[int, int]
    depth: dict[int, int]

    def children_counts(self) -> dict[int, int]:
        cnt = {v: 0 for v, d in self.depth.items() if d == 1}
        for v, p in self.parent.items():
            if self.depth[v] == 2:
                cnt[p] += 1
        return cnt

    @property
    def max_children(self) -> int:
        return max(self.children_counts().values(), default=0)


# ---------------------------------------------------------------------------
# referee

@dataclass
class Sketch:
    node: int
    degree: int
    fingerprint: int


def twin_reduce(sketches: list[Sketch], weights: list[int], p: int) -> tuple[int, bool]:
    """Merge twin classes until none remain.

    ``weights[v]`` is the random value of node ``v``; ``fingerprint`` of a
    node is the sum of its neighbours' weights mod ``p``.  Returns the number
    of surviving classes and whether an inconsistent match (hash collision)
    was seen.
    """
    fp: dict[int, int] = {}
    w: dict[int, int] = {}
    deg: dict[int, int] = {}
    size: dict[int, int] = {}
    open_b: dict[int, set] = {}
    closed_b: dict[int, set] = {}

    def insert(c):
        open_b.setdefault(fp[c], set()).add(c)
        closed_b.setdefault((fp[c] + w[c]) % p, set()).add(c)

    def remove(c):
        open_b[fp[c]].discard(c)
        closed_b[(fp[c] + w[c]) % p].discard(c)

    for s in sketches:
        c = s.node
        fp[c], w[c], deg[c], size[c] = s.fingerprint % p, weights[c] % p, s.degree, 1
        insert(c)
    alive = set(fp)
    work = sorted(alive)
    fresh = max(alive, default=0) + 1
    collision = False
    while work:
        c = work.pop()
        if c not in alive:
            continue
        mate = next((d for d in sorted(open_b.get(fp[c], ())) if d != c), None)
        true_twin = False
        if mate is None:
            mate = next((d for d in sorted(closed_b.get((fp[c] + w[c]) % p, ())) if d != c), None)
            true_twin = mate is not None
        if mate is None:
            continue
        d = mate
        if true_twin:
            consistent = deg[c] - size[d] == deg[d] - size[c]
        else:
            consistent = deg[c] == deg[d]
        if not consistent:
            collision = True
            continue
        remove(c)
        remove(d)
        alive -= {c, d}
        e = fresh
        fresh += 1
        fp[e] = (fp[c] - w[d]) % p if true_twin else fp[c]
        deg[e] = deg[c] - size[d] if true_twin else deg[c]
        w[e] = (w[c] + w[d]) % p
        size[e] = size[c] + size[d]
        alive.add(e)
        insert(e)
        work.append(e)
    return len(alive), collision


# ---------------------------------------------------------------------------
# phase 1: depth-2 tree

class TreeNode(NodeProgram):
    """Rounds 1-8 of the schedule; output ``(verdict, reason, depth, parent, children)``."""

    def initialize(self, view):
        super().initialize(view)
        self.n = view.n
        self.L = id_bits(view.n)
        v = view.node
        self.min_est = v
        self.best = (len(view.neighbors), -v)
        self.verdict: str | None = None
        self.reason = ""
        self.root = -1
        self.depth = -1
        self.parent = -1
        self.children: list[int] = []
        self.cap = view.input if view.input is not None else fanout_cap(view.n)
        self.last_round = 0

    def _reject(self, why: str):
        self.verdict = "reject"
        self.reason = why
        self.halted = True
        return None

    def step(self, rnd, inbox):
        enc = self.view.encode
        v = self.view.node
        self.last_round = rnd
        if rnd <= 5:
            if rnd == 4 and any(m.values[0] != self.min_est for m in inbox.values()):
                # neighbours' round-3 messages carry their 2-hop minima
                return self._reject("diameter")
            for m in inbox.values():
                mn, d, bid = m.values
                self.min_est = min(self.min_est, mn)
                self.best = max(self.best, (d, -bid))
            if rnd < 5:
                return enc(("id", self.min_est), ("int", self.best[0], self.L), ("id", -self.best[1]))
            self.root = -self.best[1]
            if self.n >= 2 and 2 * self.best[0] < self.n:
                return self._reject("low-degree")
            if v == self.root:
                self.depth = 0
                return enc(("int", 1, 2))
            return None
        if rnd == 6:
            if self.root in inbox:
                self.depth = 1
                self.parent = self.root
                return enc(("int", 2, 2))
            return None
        if rnd == 7:
            if self.depth < 0:
                ups = sorted(w for w, m in inbox.items() if m.values == (2,))
                if not ups:
                    return self._reject("diameter")
                self.depth = 2
                self.parent = ups[int(self.view.private.integers(len(ups)))]
                return enc(("id", self.parent))
            return None
        if self.depth == 1:
            self.children = sorted(w for w, m in inbox.items() if m.values == (v,))
            if len(self.children) > self.cap:
                return self._reject("fanout")
        self.halted = True
        return None

    def busy(self):
        return self.verdict is None and self.last_round < 8

    def finalize(self):
        return (self.verdict, self.reason, self.depth, self.parent, tuple(self.children))


@dataclass
class TreeOutcome:
    tree: Depth2Tree | None
    rejected_by: dict[int, str]
    transcript: Transcript
    node_state: list


def build_depth2_tree(g: Graph, cfg: NetworkConfig, fanout: int | None = None) -> TreeOutcome:
    """Run the tree phase; ``tree`` is ``None`` when some node rejected."""
    bcfg = cfg.with_mode("broadcast")
    tr = check_phase(run(lambda v: TreeNode(), g, bcfg, inputs=[fanout] * g.node_count), "p4 tree")
    outs = tr.node_outputs
    rejected = {v: o[1] for v, o in enumerate(outs) if o[0] == "reject"}
    tree = None
    if not rejected:
        root = next(v for v, o in enumerate(outs) if o[2] == 0)
        tree = Depth2Tree(root, {v: o[3] for v, o in enumerate(outs) if v != root},
                          {v: o[2] for v, o in enumerate(outs)})
    return TreeOutcome(tree, rejected, tr, outs)


# ---------------------------------------------------------------------------
# phase 2: sketches to the referee

class SketchNode(NodeProgram):
    """Input ``(depth, parent, children)``.  Depth-2 nodes send their sketch,
    depth-1 nodes send theirs and relay their children's, the root referees."""

    def initialize(self, view):
        super().initialize(view)
        n = view.n
        self.n = n
        self.L = id_bits(n)
        self.p = fingerprint_modulus(n)
        self.weights = view.shared.integers(4, self.p, n)
        self.depth, self.parent, children = view.input
        self.children = set(children)
        self.deg = len(view.neighbors)
        self.fp = int(sum(int(self.weights[u]) for u in view.neighbors) % self.p)
        self.chunk_bits = min(view.bandwidth, self.p.bit_length())
        self.chunks = -(-self.p.bit_length() // self.chunk_bits)
        self.sketch_len = 1 + self.chunks
        self.queue = self._own_sketch() if self.depth > 0 else []
        self.head = 0
        self.child_buf = {c: [] for c in sorted(self.children)}
        self.streams: dict[int, list] = {w: [] for w in view.neighbors} if self.depth == 0 else {}
        self.verdict: str | None = None
        self.reason = ""
        self.referee: dict[str, Any] | None = None

    def _own_sketch(self):
        enc = self.view.encode
        msgs = [enc(("id", self.view.node), ("int", self.deg, self.L))]
        for i in range(self.chunks):
            part = (self.fp >> (i * self.chunk_bits)) & ((1 << self.chunk_bits) - 1)
            msgs.append(enc(("int", part, self.chunk_bits)))
        return msgs

    def step(self, rnd, inbox):
        if self.depth == 0:
            for w, m in inbox.items():
                self.streams[w].append(m)
            return None
        if self.depth == 1:
            for c, buf in self.child_buf.items():
                if c in inbox:
                    buf.append(inbox[c])
                    if len(buf) == self.sketch_len:
                        self.queue.extend(buf)
                        self.child_buf[c] = []
        if self.head < len(self.queue):
            m = self.queue[self.head]
            self.head += 1
            return m
        if not any(self.child_buf.values()) and rnd > self.sketch_len:
            self.halted = True
        return None

    def busy(self):
        return self.depth > 0 and (self.head < len(self.queue) or any(self.child_buf.values()))

    def finalize(self):
        if self.depth == 0:
            self._referee()
        return {"verdict": self.verdict, "reason": self.reason, "referee": self.referee}

    def _referee(self):
        sketches = [Sketch(self.view.node, self.deg, self.fp)]
        for w, msgs in self.streams.items():
            for i in range(0, len(msgs) - self.sketch_len + 1, self.sketch_len):
                node, deg = msgs[i].values
                fp = 0
                for j in range(self.chunks):
                    fp |= msgs[i + 1 + j].values[0] << (j * self.chunk_bits)
                sketches.append(Sketch(node, deg, fp))
        seen = {s.node for s in sketches}
        if len(seen) != self.n:
            self.verdict, self.reason = "reject", "missing-sketches"
            self.referee = {"sketches": len(seen)}
            return
        classes, collision = twin_reduce(sketches, [int(x) for x in self.weights], self.p)
        self.referee = {"sketches": len(seen), "classes": classes, "collision": collision}
        if collision:
            self.verdict, self.reason = "collision", "fingerprint-collision"
        elif classes == 1:
            self.verdict = "accept"
        else:
            self.verdict, self.reason = "reject", "no-twins"


def sketch_and_refer(g: Graph, tree: Depth2Tree, cfg: NetworkConfig):
    """Returns ``(verdict, reason, transcript)``; verdict is accept/reject/collision."""
    kids: dict[int, list] = {v: [] for v in g.nodes()}
    for v, p in tree.parent.items():
        if tree.depth[v] == 2:
            kids[p].append(v)
    inputs = [(tree.depth[v], tree.parent.get(v, -1), kids[v]) for v in g.nodes()]
    tr = check_phase(run(lambda v: SketchNode(), g, cfg.with_mode("broadcast"), inputs=inputs),
                     "p4 sketch")
    out = tr.node_outputs[tree.root]
    return out["verdict"], out["reason"], tr


# ---------------------------------------------------------------------------
# drivers

@dataclass
class P4Result:
    accept: bool
    reason: str
    rounds: int
    max_bits: int
    max_children: int | None
    depth2_nodes: int | None
    collisions: int
    phases: list = field(default_factory=list)
    digest: str = ""

    def to_json(self) -> dict:
        return {"accept": self.accept, "reason": self.reason, "rounds": self.rounds,
                "max_bits": self.max_bits, "max_children": self.max_children,
                "depth2_nodes": self.depth2_nodes, "collisions": self.collisions,
                "phases": self.phases}


def decide_p4_free(g: Graph, cfg: NetworkConfig, fanout: int | None = None,
                   max_collision_retries: int = 5) -> P4Result:
    """One run of the randomised test (with fresh seeds on fingerprint collisions)."""
    from .congest import PhaseLog

    log = PhaseLog()
    collisions = 0
    attempt_cfg = cfg
    for attempt in range(max_collision_retries + 1):
        t = build_depth2_tree(g, attempt_cfg, fanout)
        log.add(f"tree[{attempt}]", t.transcript)
        if t.tree is None:
            reason = sorted(set(t.rejected_by.values()))[0]
            return P4Result(False, reason, log.rounds, log.max_bits, None, None, collisions,
                            log.summary()["phases"], log.digest())
        verdict, reason, tr = sketch_and_refer(g, t.tree, attempt_cfg)
        log.add(f"sketch[{attempt}]", tr)
        if verdict != "collision":
            tree = t.tree
            return P4Result(verdict == "accept", reason, log.rounds, log.max_bits,
                            tree.max_children, sum(1 for d in tree.depth.values() if d == 2),
                            collisions, log.summary()["phases"], log.digest())
        collisions += 1
        attempt_cfg = cfg.derive(1000 + attempt)
    raise RuntimeError("fingerprint collisions on every retry")


def decide_p4_majority(g: Graph, cfg: NetworkConfig, runs: int = 3) -> tuple[bool, list[P4Result]]:
    """Majority vote over independent runs; stops once the outcome is settled."""
    results: list[P4Result] = []
    need = runs // 2 + 1
    for i in range(runs):
        results.append(decide_p4_free(g, cfg.derive(i)))
        yes = sum(r.accept for r in results)
        if yes >= need or len(results) - yes >= need:
            break
    yes = sum(r.accept for r in results)
    return yes >= need, results
