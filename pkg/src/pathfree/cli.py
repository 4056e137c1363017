"""Command-line entry point: ``python -m pathfree <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import certify, gadgets, quantum_c4
from .congest import NetworkConfig
from .families import hub_graph, module_blowup, p4_scaling_cograph, two_hub_graph
from .graphcore import (EdgeListError, Graph, ParameterError, cycle_graph, diameter,
                        dumps_edge_list, induced_c4_exists, induced_path_exists, is_connected,
                        load_edge_list, ordered_induced_path_exists, path_graph, random_cograph,
                        random_connected_gnp, random_gnp, random_p5_free)
from .p4 import decide_p4_majority
from .p5 import P5Params, decide_p5_majority
from .suites import SUITES, ConfigError, ExperimentConfig, run_suite


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, default=str))


def _load(path: str) -> Graph:
    try:
        return load_edge_list(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


# -- gen ---------------------------------------------------------------------

GENERATORS = {
    "gnp": (("n", int), ("p", float)),
    "connected-gnp": (("n", int), ("p", float)),
    "cograph": (("n", int),),
    "p4-scaling": (("n", int),),
    "p5free": (("n", int),),
    "hub": (("n", int),),
    "two-hub": (("n", int),),
    "blowup": (),
    "path": (("n", int),),
    "cycle": (("n", int),),
}


def _generate(kind: str, args: list[str], seed: int) -> Graph:
    spec = GENERATORS[kind]
    if len(args) != len(spec):
        want = " ".join(name for name, _ in spec)
        raise UsageError(f"gen {kind} expects: {want}")
    try:
        vals = [typ(a) for (_, typ), a in zip(spec, args)]
    except ValueError as e:
        raise UsageError(str(e)) from None
    if kind == "gnp":
        return random_gnp(vals[0], vals[1], seed)
    if kind == "connected-gnp":
        return random_connected_gnp(vals[0], vals[1], seed)
    if kind == "cograph":
        return random_cograph(vals[0], seed)
    if kind == "p4-scaling":
        return p4_scaling_cograph(vals[0], seed)
    if kind == "p5free":
        return random_p5_free(vals[0], seed)
    if kind == "hub":
        return hub_graph(vals[0], seed)
    if kind == "two-hub":
        return two_hub_graph(vals[0], seed)
    if kind == "blowup":
        return module_blowup(seed)
    if kind == "path":
        return path_graph(vals[0])
    return cycle_graph(vals[0])


def cmd_gen(a) -> int:
    g = _generate(a.kind, a.args, a.seed)
    text = dumps_edge_list(g)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# -- oracle ------------------------------------------------------------------

def cmd_oracle(a) -> int:
    g = _load(a.file)
    pred = a.predicate
    if pred in ("p4free", "p5free", "pkfree"):
        k = {"p4free": 4, "p5free": 5}.get(pred, a.k)
        if k is None:
            raise UsageError("pkfree needs --k")
        value = not (g.node_count >= k and induced_path_exists(g, k, a.budget))
    elif pred == "c4free":
        value = not induced_c4_exists(g)
    elif pred == "orderedp5":
        if g.colors is None:
            raise UsageError("orderedp5 needs a colored graph ('c u color' lines)")
        value = ordered_induced_path_exists(g, 5)
    elif pred == "connected":
        value = is_connected(g)
    elif pred == "diameter":
        d = diameter(g)
        value = None if d == float("inf") else int(d)
    else:
        raise UsageError(f"unknown predicate {pred}")
    _emit({"file": a.file, "predicate": pred, "value": value})
    return 0


# -- algorithms ----------------------------------------------------------------

def _netcfg(a) -> NetworkConfig:
    return NetworkConfig(seed=a.seed, bandwidth_constant=a.bandwidth_constant)


def cmd_p4(a) -> int:
    g = _load(a.file)
    verdict, runs = decide_p4_majority(g, _netcfg(a), a.runs)
    _emit({"p4_free": verdict, "runs": [r.to_json() for r in runs]})
    return 0


def cmd_p5(a) -> int:
    g = _load(a.file)
    verdict, runs = decide_p5_majority(g, _netcfg(a), P5Params(branch=a.branch), a.runs)
    _emit({"p5_free": verdict, "runs": [r.to_json() for r in runs]})
    return 0


def cmd_certify(a) -> int:
    g = _load(a.file)
    bundle = certify.prove(g, seed=a.seed)
    verdict = certify.verify(g, bundle)
    out = {"n": g.node_count, "certifiable": bundle.certifiable, "all_accept": verdict.all_accept,
           "rejecting": verdict.rejecting, "max_bits": bundle.max_bits(),
           "size_constant": certify.size_constant(bundle)}
    if a.bundle_out:
        with open(a.bundle_out, "wb") as fh:
            fh.write(bundle.to_bytes())
    if a.mutants:
        import numpy as np
        rng = np.random.default_rng(a.seed)
        caught = 0
        for i in range(a.mutants):
            kind = certify.SEMANTIC_KINDS[i % len(certify.SEMANTIC_KINDS)]
            caught += not certify.verify(g, certify.semantic_mutant(bundle, kind, rng)).all_accept
        out["mutants"], out["mutants_rejected"] = a.mutants, caught
    _emit(out)
    return 0


def cmd_gadget(a) -> int:
    fam = a.family
    try:
        if fam == "NOF_P5":
            base = gadgets.single_triangle_base() if a.base_size is None else gadgets.triangle_base(a.base_size)
            t = len(base.triangles)
            xa, xb, xc = (a.xa or "1" * t), (a.xb or "1" * t), (a.xc or "1" * t)
            gg = gadgets.build_nof_p5(xa, xb, xc, base)
            expected = gadgets.nof_disjoint(xa, xb, xc)
        else:
            if a.x is None or a.y is None:
                raise UsageError("two-party families need --x and --y")
            builders = {"P11_d1": lambda: gadgets.build_p11(a.x, a.y, a.n),
                        "ORDERED_P5": lambda: gadgets.build_ordered_p5(a.x, a.y, a.n),
                        "P22_d2": lambda: gadgets.build_p22(a.x, a.y, a.n),
                        "P8d_d3plus": lambda: gadgets.build_p8d(a.x, a.y, a.n, a.d)}
            gg = builders[fam]()
            expected = gadgets.disj(a.x, a.y)
    except gadgets.GadgetError as e:
        raise UsageError(str(e)) from None
    if a.locality > 1:
        gg = gadgets.lengthen_for_locality(gg, a.locality)
    out = {"family": gg.family, "nodes": gg.graph.node_count, "edges": gg.graph.edge_count,
           "k_target": gg.k_target, "cut": gadgets.cut_size(gg), "disj": expected}
    if a.check:
        chk = gadgets.check_iff(gg, expected, a.budget)
        out.update(outcome=chk.outcome, has_path=chk.has_path)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(dumps_edge_list(gg.graph))
    _emit(out)
    return 0 if out.get("outcome") != "fail" else 1


def cmd_quantum(a) -> int:
    cost = quantum_c4.QuantumCostModel(search_constant=a.cost_constant, log_exponent=a.log_exponent)
    policy = a.delta_policy if a.delta_policy == "sqrt" else int(a.delta_policy)
    if a.sweep:
        fit = quantum_c4.exponent_sweep(variant=a.variant, cost=cost, seed=a.seed)
        _emit({"variant": a.variant, "exponent_fit": fit.to_json()})
        return 0
    if not a.file:
        raise UsageError("quantum-c4 needs a graph file or --sweep")
    g = _load(a.file)
    res = quantum_c4.detect_induced_c4(g, cost, a.seed, a.variant, policy)
    _emit(res.to_json())
    return 0


def cmd_suite(a) -> int:
    if a.config:
        cfg = ExperimentConfig.from_file(a.config)
        if a.name and a.name != cfg.suite:
            raise UsageError(f"config is for suite {cfg.suite}, not {a.name}")
    else:
        if not a.name:
            raise UsageError("suite needs a name or --config")
        params = {}
        for kv in a.set or []:
            if "=" not in kv:
                raise UsageError(f"--set expects key=value, got {kv!r}")
            k, v = kv.split("=", 1)
            try:
                params[k] = json.loads(v)
            except json.JSONDecodeError:
                params[k] = v
        cfg = ExperimentConfig(a.name, seeds=a.seeds or [0], params=params)
    if a.out:
        cfg.out_dir = a.out
    report = run_suite(cfg)
    _emit({"suite": report.suite, "checks": report.checks, "passed": report.passed,
           "summary": report.summary})
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pathfree", description="Induced-path freeness toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="write a generated graph as an edge list")
    s.add_argument("kind", choices=sorted(GENERATORS))
    s.add_argument("args", nargs="*")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("oracle", help="evaluate a brute-force predicate on an edge-list file")
    s.add_argument("file")
    s.add_argument("predicate", choices=["p4free", "p5free", "pkfree", "c4free", "orderedp5",
                                         "connected", "diameter"])
    s.add_argument("--k", type=int)
    s.add_argument("--budget", type=float)
    s.set_defaults(fn=cmd_oracle)

    for name, fn, extra in (("p4", cmd_p4, False), ("p5", cmd_p5, True)):
        s = sub.add_parser(name, help=f"run the distributed {name.upper()}-freeness test")
        s.add_argument("file")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--runs", type=int, default=3)
        s.add_argument("--bandwidth-constant", type=int, default=4)
        if extra:
            s.add_argument("--branch", choices=["sparse", "dense"])
        s.set_defaults(fn=fn)

    s = sub.add_parser("certify", help="build and check a P5-freeness certificate")
    s.add_argument("file")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mutants", type=int, default=0)
    s.add_argument("--bundle-out")
    s.set_defaults(fn=cmd_certify)

    s = sub.add_parser("gadget", help="build a lower-bound gadget graph")
    s.add_argument("family", choices=gadgets.FAMILIES)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--x")
    s.add_argument("--y")
    s.add_argument("--xa")
    s.add_argument("--xb")
    s.add_argument("--xc")
    s.add_argument("--base-size", type=int)
    s.add_argument("--locality", type=int, default=1)
    s.add_argument("--check", action="store_true")
    s.add_argument("--budget", type=float, default=60.0)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_gadget)

    s = sub.add_parser("quantum-c4", help="induced 4-cycle detection with charged quantum rounds")
    s.add_argument("file", nargs="?")
    s.add_argument("--delta-policy", default="sqrt")
    s.add_argument("--cost-constant", type=float, default=2.0)
    s.add_argument("--log-exponent", type=int, default=1)
    s.add_argument("--variant", choices=quantum_c4.VARIANTS, default="bucketed")
    s.add_argument("--sweep", action="store_true")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_quantum)

    s = sub.add_parser("suite", help="run an experiment suite and write JSON + CSV")
    s.add_argument("name", nargs="?", choices=SUITES)
    s.add_argument("--config")
    s.add_argument("--out")
    s.add_argument("--seeds", type=int, nargs="+")
    s.add_argument("--set", action="append", metavar="KEY=VALUE")
    s.set_defaults(fn=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        return a.fn(a)
    except (UsageError, ConfigError, EdgeListError, ParameterError) as e:
        print(f"pathfree {a.command}: error: {e}", file=sys.stderr)
        return 2
