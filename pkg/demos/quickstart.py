"""Decide P4- and P5-freeness in the simulator and compare with the brute-force oracle."""
from pathfree.congest import NetworkConfig
from pathfree.families import diameter3_instances
from pathfree.graphcore import cycle_graph, induced_path_exists, petersen_graph, random_cograph
from pathfree.p4 import decide_p4_majority
from pathfree.p5 import P5Params, decide_p5_free, decide_p5_majority

cfg = NetworkConfig(seed=1)

cograph = random_cograph(40, seed=3)
ok, runs = decide_p4_majority(cograph, cfg)
print(f"cograph n=40: P4-free={ok}, rounds={runs[0].rounds}, max bits/msg={runs[0].max_bits}")

for name, g in (("C5", cycle_graph(5)), ("Petersen", petersen_graph())):
    ok, runs = decide_p5_majority(g, cfg)
    print(f"{name}: P5-free={ok} (oracle: {not induced_path_exists(g, 5)}), branch={runs[0].branch}")

g = next(iter(diameter3_instances(1, seed=4)))
r = decide_p5_free(g, cfg, P5Params(branch="dense"))
print(f"diameter-3 blow-up n={g.node_count}: decision={r.accept}, reason={r.reason or '-'}, "
      f"hidden pairs={len(r.state.hidden()) if r.state else 0}, t={r.t}, local count={r.local_count}")
for phase, rounds in r.phases:
    print(f"  {phase:<28}{rounds:>6} rounds")
