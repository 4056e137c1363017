"""Experiment suites: run a named study, write a JSON summary and a CSV table.

Report bodies are deterministic for a fixed config; wall-clock data lives only
in the ``header`` block.  Budget overruns produce ``inconclusive`` rows, which
never count as failures on their own.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import certify, gadgets, quantum_c4
from .congest import NetworkConfig
from .families import hub_graph, p4_scaling_cograph, two_hub_graph
from .graphcore import (Graph, connected_graphs, count_induced_paths, diameter,
                        induced_c4_exists, induced_path_exists,
                        induced_path_exists_by_subsets, is_connected, iter_induced_paths,
                        random_connected_gnp, random_gnp, random_p5_free)
from .p4 import decide_p4_majority
from .p5 import P5Params, decide_p5_free, decide_p5_majority

SCHEMA_VERSION = 1
SUITES = ("oracle-xval", "p4", "p5", "certify", "gadgets", "quantum-c4", "scaling")
WORKERS_ENV = "PATHFREE_WORKERS"


class ConfigError(ValueError):
    """Invalid experiment configuration (a usage error)."""


@dataclass
class ExperimentConfig:
    suite: str
    seeds: list[int] = field(default_factory=lambda: [0])
    repetitions: int = 1
    params: dict = field(default_factory=dict)
    out_dir: str | None = None

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if not self.seeds:
            raise ConfigError("seeds must be non-empty")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be at least 1")
        self.seeds = [int(s) for s in self.seeds]

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        unknown = set(d) - {"suite", "seeds", "repetitions", "params", "out_dir"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "suite" not in d:
            raise ConfigError("config needs a 'suite'")
        return cls(**d)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None

    def get(self, key, default=None):
        return self.params.get(key, default)


@dataclass
class SuiteReport:
    suite: str
    config: dict
    columns: list[str]
    rows: list[dict]
    checks: dict[str, bool]
    summary: dict
    header: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def body(self) -> dict:
        return {"schema": SCHEMA_VERSION, "suite": self.suite, "config": self.config,
                "checks": self.checks, "passed": self.passed, "summary": self.summary,
                "rows": len(self.rows)}

    def to_json(self) -> str:
        return json.dumps({"header": self.header, "body": self.body()},
                          sort_keys=True, indent=1, default=_plain)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow({k: _cell(r.get(k)) for k in self.columns})
        return buf.getvalue()

    def write(self, out_dir) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        jp, cp = out / f"{self.suite}.json", out / f"{self.suite}.csv"
        jp.write_text(self.to_json() + "\n")
        cp.write_text(self.to_csv())
        return jp, cp


def _plain(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    raise TypeError(f"not serialisable: {type(x)}")


def _cell(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return " ".join(map(str, v))
    return "" if v is None else v


def _map(fn, items: list) -> list:
    workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(workers) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# corpora

def corpus(max_n: int, random_count: int, n_range: tuple[int, int], seed: int,
           p_range=(0.1, 0.6)) -> list[tuple[str, Graph]]:
    """Every connected graph up to ``max_n`` nodes, then seeded random connected G(n, p)."""
    out = [(f"exh{g.node_count}-{i}", g) for i, g in enumerate(connected_graphs(max_n))]
    rng = np.random.default_rng(seed)
    for i in range(random_count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        p = float(rng.uniform(*p_range))
        out.append((f"gnp{n}-{i}", random_connected_gnp(n, p, int(rng.integers(1 << 30)))))
    return out


def p5_free_corpus(max_n: int, random_count: int, n_range=(10, 40), seed: int = 0):
    out = [(f"exh{g.node_count}-{i}", g) for i, g in enumerate(connected_graphs(max_n))
           if not (g.node_count >= 5 and induced_path_exists(g, 5))]
    rng = np.random.default_rng(seed)
    for i in range(random_count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        out.append((f"p5free{n}-{i}", random_p5_free(n, int(rng.integers(1 << 30)))))
    return out


# ---------------------------------------------------------------------------
# suites

def _oracle_row(item):
    name, g = item
    row = {"instance": name, "n": g.node_count, "m": g.edge_count}
    for k in (4, 5):
        if g.node_count >= k:
            a, b = induced_path_exists(g, k), induced_path_exists_by_subsets(g, k)
        else:
            a = b = False
        row[f"p{k}_search"], row[f"p{k}_subsets"] = a, b
    return row


def suite_oracle_xval(cfg: ExperimentConfig) -> SuiteReport:
    items = corpus(cfg.get("max_n", 6), cfg.get("random", 30), (7, 12), cfg.seeds[0])
    rows = _map(_oracle_row, items)
    bad = [r["instance"] for r in rows
           if r["p4_search"] != r["p4_subsets"] or r["p5_search"] != r["p5_subsets"]]
    return SuiteReport("oracle-xval", asdict(cfg),
                       ["instance", "n", "m", "p4_search", "p4_subsets", "p5_search", "p5_subsets"],
                       rows, {"oracles-agree": not bad}, {"instances": len(rows), "disagreements": bad})


def _p4_row(args):
    (name, g), seed = args
    truth = not (g.node_count >= 4 and induced_path_exists(g, 4))
    verdict, runs = decide_p4_majority(g, NetworkConfig(seed=seed))
    return {"instance": name, "seed": seed, "n": g.node_count, "m": g.edge_count,
            "oracle_free": truth, "decided_free": verdict, "agree": verdict == truth,
            "rounds": max(r.rounds for r in runs), "runs": len(runs)}


def suite_p4(cfg: ExperimentConfig) -> SuiteReport:
    items = corpus(cfg.get("max_n", 7), cfg.get("random", 40), tuple(cfg.get("n_range", (10, 50))),
                   cfg.seeds[0])
    rows = _map(_p4_row, [(it, s) for s in cfg.seeds for it in items])
    bad = [r["instance"] for r in rows if not r["agree"]]
    return SuiteReport("p4", asdict(cfg), list(rows[0]) if rows else [], rows,
                       {"zero-disagreements": not bad},
                       {"instances": len(rows), "disagreements": bad})


def _p5_row(args):
    (name, g), seed = args
    truth = not (g.node_count >= 5 and induced_path_exists(g, 5))
    verdict, runs = decide_p5_majority(g, NetworkConfig(seed=seed))
    # every rejection raised inside the collect procedure must be backed by a real P5
    collect_rejects = [r for r in runs if r.branch == "diam3" and r.reason.startswith("cond")]
    backed = all(not truth for _ in collect_rejects)
    return {"instance": name, "seed": seed, "n": g.node_count, "m": g.edge_count,
            "oracle_free": truth, "decided_free": verdict, "agree": verdict == truth,
            "branch": runs[0].branch, "rounds": max(r.rounds for r in runs),
            "collect_rejects": len(collect_rejects), "rejects_backed": backed}


def suite_p5(cfg: ExperimentConfig) -> SuiteReport:
    items = corpus(cfg.get("max_n", 7), cfg.get("random", 40), tuple(cfg.get("n_range", (10, 60))),
                   cfg.seeds[0])
    rows = _map(_p5_row, [(it, s) for s in cfg.seeds for it in items])
    bad = [r["instance"] for r in rows if not r["agree"]]
    unbacked = [r["instance"] for r in rows if not r["rejects_backed"]]
    return SuiteReport("p5", asdict(cfg), list(rows[0]) if rows else [], rows,
                       {"zero-disagreements": not bad, "collect-rejects-backed": not unbacked},
                       {"instances": len(rows), "disagreements": bad, "unbacked": unbacked})


def _certify_row(args):
    (name, g), seed, mutants = args
    free = not (g.node_count >= 5 and induced_path_exists(g, 5))
    bundle = certify.prove(g, seed=seed)
    verdict = certify.verify(g, bundle)
    row = {"instance": name, "n": g.node_count, "p5_free": free,
           "all_accept": verdict.all_accept, "max_bits": bundle.max_bits(),
           "size_constant": certify.size_constant(bundle), "mutants": 0, "mutants_caught": 0}
    if not free:
        rng = np.random.default_rng(seed)
        caught = 0
        for i in range(mutants):
            kind = certify.SEMANTIC_KINDS[i % len(certify.SEMANTIC_KINDS)]
            bad = certify.semantic_mutant(bundle, kind, rng)
            caught += not certify.verify(g, bad).all_accept
        row["mutants"], row["mutants_caught"] = mutants, caught
    return row


def suite_certify(cfg: ExperimentConfig) -> SuiteReport:
    seed = cfg.seeds[0]
    free = p5_free_corpus(cfg.get("max_n", 6), cfg.get("random", 20),
                          tuple(cfg.get("n_range", (10, 40))), seed)
    nonfree = [(f"gnp{n}-{i}", random_connected_gnp(n, 0.3, seed * 1000 + i))
               for i, n in enumerate(range(6, 6 + cfg.get("nonfree", 10)))]
    nonfree = [(k, g) for k, g in nonfree if induced_path_exists(g, 5)]
    mutants = cfg.get("mutants", 100)
    rows = _map(_certify_row, [(it, seed, mutants) for it in free + nonfree])
    complete = all(r["all_accept"] for r in rows if r["p5_free"])
    sound = all(r["mutants_caught"] == r["mutants"] and not r["all_accept"]
                for r in rows if not r["p5_free"])
    big = [r["size_constant"] for r in rows if r["n"] >= 8]
    return SuiteReport("certify", asdict(cfg), list(rows[0]) if rows else [], rows,
                       {"complete": complete, "sound": sound},
                       {"instances": len(rows), "size_constant_max": max(big, default=None)})


def _gadget_inputs(family: str, n: int, sweep: str, samples: int, seed: int):
    length = n * n
    if sweep == "exhaustive":
        for a in range(1 << length):
            for b in range(1 << length):
                yield format(a, f"0{length}b"), format(b, f"0{length}b")
        return
    rng = np.random.default_rng(seed)
    for i in range(samples):
        x = rng.integers(0, 2, length)
        # balanced: half of the samples are disjoint by construction
        y = rng.integers(0, 2, length) & (1 - x) if i % 2 == 0 else rng.integers(0, 2, length)
        if i % 2 == 1 and not (x & y).any():
            y[int(rng.integers(length))] = 1
            x[int(np.flatnonzero(y)[0])] = 1
        yield "".join(map(str, x)), "".join(map(str, y))


def _build(family: str, x, y, n: int, d: int):
    if family == "P11_d1":
        return gadgets.build_p11(x, y, n)
    if family == "ORDERED_P5":
        return gadgets.build_ordered_p5(x, y, n)
    if family == "P22_d2":
        return gadgets.build_p22(x, y, n)
    if family == "P8d_d3plus":
        return gadgets.build_p8d(x, y, n, d)
    raise ConfigError(f"family {family!r} is not a two-party family")


def _gadget_row(args):
    family, x, y, n, d, budget = args
    gg = _build(family, x, y, n, d)
    chk = gadgets.check_iff(gg, gadgets.disj(x, y), budget)
    return {"family": family, "x": x, "y": y, "disj": gadgets.disj(x, y),
            "nodes": gg.graph.node_count, "cut": gadgets.cut_size(gg),
            "has_path": chk.has_path, "outcome": chk.outcome}


def suite_gadgets(cfg: ExperimentConfig) -> SuiteReport:
    family = cfg.get("family", "P11_d1")
    n, d = cfg.get("n", 2), cfg.get("d", 3)
    sweep = cfg.get("sweep", "exhaustive" if n <= 2 else "sampled")
    budget = cfg.get("budget", 60.0)
    inputs = list(_gadget_inputs(family, n, sweep, cfg.get("samples", 20), cfg.seeds[0]))
    rows = _map(_gadget_row, [(family, x, y, n, d, budget) for x, y in inputs])
    fails = [r for r in rows if r["outcome"] == "fail"]
    inconclusive = sum(r["outcome"] == "inconclusive" for r in rows)
    checks = {"iff": not fails, "inconclusive<=20%": inconclusive <= 0.2 * len(rows)}
    expected_cut = cfg.get("expected_cut")
    if expected_cut is not None:
        checks["cut"] = all(r["cut"] == expected_cut for r in rows)
    return SuiteReport("gadgets", asdict(cfg),
                       ["family", "x", "y", "disj", "nodes", "cut", "has_path", "outcome"], rows,
                       checks, {"pairs": len(rows), "fail": len(fails), "inconclusive": inconclusive,
                                "pass": sum(r["outcome"] == "pass" for r in rows)})


def _qc4_row(args):
    i, n, p, seed, variant = args
    g = random_gnp(n, p, seed * 100_003 + i)
    truth = induced_c4_exists(g)
    found = quantum_c4.majority_detect(g, seed=seed, variant=variant)
    return {"instance": i, "n": n, "m": g.edge_count, "oracle": truth, "detected": found,
            "agree": truth == found}


def suite_quantum(cfg: ExperimentConfig) -> SuiteReport:
    count, n, p = cfg.get("count", 200), cfg.get("n", 64), cfg.get("p", 0.1)
    variant = cfg.get("variant", "bucketed")
    rows = _map(_qc4_row, [(i, n, p, cfg.seeds[0], variant) for i in range(count)])
    bad = [r["instance"] for r in rows if not r["agree"]]
    return SuiteReport("quantum-c4", asdict(cfg), ["instance", "n", "m", "oracle", "detected", "agree"],
                       rows, {"matches-oracle": not bad}, {"instances": len(rows), "mismatches": bad})


# -- scaling ---------------------------------------------------------------

def p4_scaling_rows(sizes, seed: int) -> list[dict]:
    from .p4 import decide_p4_free
    rows = []
    for n in sizes:
        g = p4_scaling_cograph(n, seed)
        r = decide_p4_free(g, NetworkConfig(seed=seed))
        L = math.ceil(math.log2(n))
        rows.append({"target": "p4", "seed": seed, "n": n, "m": g.edge_count, "rounds": r.rounds,
                     "accept": r.accept, "ratio": r.rounds / L, "bound": L})
    return rows


def p5_scaling_rows(sizes, seed: int, family: str = "hub", branch: str | None = None) -> list[dict]:
    gen = {"hub": hub_graph, "two-hub": two_hub_graph}[family]
    rows = []
    for n in sizes:
        g = gen(n, seed)
        r = decide_p5_free(g, NetworkConfig(seed=seed), P5Params(branch=branch))
        L = math.ceil(math.log2(n))
        rows.append({"target": "p5", "family": family, "seed": seed, "n": n, "m": g.edge_count,
                     "branch": r.branch, "rounds": r.rounds, "ratio": r.rounds / (n * L * L),
                     "bound": n * L * L})
    return rows


def fitted_constant(rows: list[dict]) -> float:
    """Smallest C with rounds <= C * bound(n) on every row."""
    return max(r["ratio"] for r in rows)


def least_squares_constant(rows: list[dict]) -> float:
    """C minimising sum (rounds - C * bound(n))^2 over the rows."""
    return sum(r["rounds"] * r["bound"] for r in rows) / sum(r["bound"] ** 2 for r in rows)


def stable(values, tol: float = 0.2) -> bool:
    mid = float(np.median(values))
    return all(abs(v - mid) <= tol * mid for v in values)


def suite_scaling(cfg: ExperimentConfig) -> SuiteReport:
    target = cfg.get("target", "p4")
    rows: list[dict] = []
    checks: dict[str, bool] = {}
    summary: dict = {"target": target}
    if target == "p4":
        sizes = cfg.get("sizes", [2 ** k for k in range(6, 13)])
        consts, fits = [], []
        for s in cfg.seeds:
            part = p4_scaling_rows(sizes, s)
            rows += part
            consts.append(fitted_constant(part))
            fits.append(least_squares_constant(part))
        summary["bound_constants"] = consts
        summary["fitted_constants"] = fits
        checks["stable"] = stable(fits)
    elif target == "p5":
        sizes = cfg.get("sizes", [2 ** k for k in range(5, 10)])
        consts, fits = [], []
        for s in cfg.seeds:
            part = p5_scaling_rows(sizes, s, cfg.get("family", "hub"), cfg.get("branch"))
            rows += part
            consts.append(fitted_constant(part))
            fits.append(least_squares_constant(part))
        summary["bound_constants"] = consts
        summary["fitted_constants"] = fits
        checks["stable"] = stable(fits)
    elif target == "quantum-c4":
        cost = quantum_c4.QuantumCostModel(search_constant=cfg.get("cost_constant", 2.0),
                                           log_exponent=cfg.get("log_exponent", 0))
        sizes = cfg.get("sizes", [2 ** k for k in range(8, 15)])
        fits = {}
        for v in quantum_c4.VARIANTS:
            fit = quantum_c4.exponent_sweep(sizes, seed=cfg.seeds[0], variant=v, cost=cost)
            fits[v] = fit
            rows += [{"target": "quantum-c4", "variant": v, "n": n, "rounds": r}
                     for n, r in zip(fit.sizes, fit.rounds)]
        summary["exponent"] = {v: f.slope for v, f in fits.items()}
        lo, hi = cfg.get("band", (0.67, 0.83))
        checks["exponent-in-band"] = lo <= fits["bucketed"].slope <= hi
        checks["variant-order"] = all(a >= b >= c for a, b, c in zip(
            fits["naive"].rounds, fits["amplified"].rounds, fits["bucketed"].rounds))
    else:
        raise ConfigError(f"unknown scaling target {target!r}")
    cols = sorted({k for r in rows for k in r})
    return SuiteReport("scaling", asdict(cfg), cols, rows, checks, summary)


_RUNNERS = {"oracle-xval": suite_oracle_xval, "p4": suite_p4, "p5": suite_p5,
            "certify": suite_certify, "gadgets": suite_gadgets, "quantum-c4": suite_quantum,
            "scaling": suite_scaling}


def run_suite(cfg: ExperimentConfig) -> SuiteReport:
    """Run the named suite; writes ``<suite>.json`` and ``<suite>.csv`` when ``out_dir`` is set."""
    t0 = time.time()
    report = _RUNNERS[cfg.suite](cfg)
    report.header = {"started_at": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime(t0)),
                     "elapsed_s": round(time.time() - t0, 3)}
    if cfg.out_dir:
        report.write(cfg.out_dir)
    return report


def central_difference(g: Graph, hidden: set) -> int:
    """#P5 once the hidden edges are deleted, minus #P5 of g that avoid them."""
    pruned = Graph(g.node_count, [e for e in g.edges() if e not in hidden])
    kept = sum(1 for p in iter_induced_paths(g, 5)
               if not any((min(a, b), max(a, b)) in hidden for a, b in zip(p, p[1:])))
    return count_induced_paths(pruned, 5) - kept


__all__ = ["ExperimentConfig", "SuiteReport", "ConfigError", "run_suite", "SUITES",
           "corpus", "p5_free_corpus", "central_difference", "p4_scaling_rows",
           "p5_scaling_rows", "fitted_constant", "least_squares_constant", "stable"]
