"""Charged-round growth of the induced 4-cycle detector on sparse random graphs."""
from pathfree.quantum_c4 import VARIANTS, QuantumCostModel, exponent_sweep

sizes = [2 ** k for k in range(8, 13)]
for log_exp in (0, 1):
    cost = QuantumCostModel(log_exponent=log_exp)
    print(f"polylog exponent {log_exp}")
    for v in VARIANTS:
        fit = exponent_sweep(sizes, variant=v, cost=cost)
        print(f"  {v:<10} slope {fit.slope:.3f}  rounds {fit.rounds}")
