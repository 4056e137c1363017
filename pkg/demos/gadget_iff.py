"""Sweep the 11-node-path gadget over all inputs of length 4 and show the disjointness iff."""
import itertools

from pathfree import gadgets

counts = {"pass": 0, "fail": 0, "inconclusive": 0}
for a, b in itertools.product(range(16), repeat=2):
    x, y = format(a, "04b"), format(b, "04b")
    gg = gadgets.build_p11(x, y, 2)
    counts[gadgets.check_iff(gg, gadgets.disj(x, y)).outcome] += 1
print("P11 gadget, n=2:", counts, "cut size", gadgets.cut_size(gadgets.build_p11("0000", "0000", 2)))

gg = gadgets.build_p11("1000", "1000", 2)
print("witness for a shared bit:", " - ".join(gg.names[v] for v in gg.witness))
