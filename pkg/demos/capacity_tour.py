"""Tour of the capacity optimizer on channels with known answers.

Runs the maximizer on the benchmark channels, on the switched 3-to-2
construction whose assisted and unassisted capacities coincide at 2 bits,
and on an energy-constrained amplitude damping instance.
"""

import numpy as np

from qcap import (
    EnergyConstraint,
    amplitude_damping,
    ce_maximize,
    ce_maximize_constrained,
    dephasing,
    depolarizing,
    erasure,
    noiseless,
    switched_3to2,
)

cases = [
    ("noiseless qubit", noiseless(2), 2.0),
    ("50% erasure", erasure(2, 0.5), 1.0),
    ("2/3 depolarizing", depolarizing(2, 2.0 / 3.0), 0.2075),
    ("100% dephasing", dephasing(2), 1.0),
    ("amplitude damping p=0.5", amplitude_damping(0.5), 1.0),
]

print(f"{'channel':<28} {'capacity':>10} {'reference':>10} {'iters':>6}")
for name, ch, ref in cases:
    res = ce_maximize(ch)
    print(f"{name:<28} {res.value:>10.6f} {ref:>10.4f} {res.iterations:>6}")

res = ce_maximize(switched_3to2())
print(f"\nswitched 3->2 channel (8-dim input): {res.value:.6f} bits")
print("the classical and assisted capacities of this channel coincide at 2")

ch = amplitude_damping(0.3)
free = ce_maximize(ch)
for bound in (1.0, 0.3, 0.1, 0.0):
    cons = EnergyConstraint(np.diag([0.0, 1.0]), bound)
    res = ce_maximize_constrained(ch, cons)
    print(f"excited-state budget {bound:>4}: {res.value:.6f} bits"
          + ("  (unconstrained)" if abs(res.value - free.value) < 1e-9 else ""))
