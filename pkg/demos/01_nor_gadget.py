# The NOR gate as a three-spin Ising model.
# Spin +1 is logical 1, spin -1 is logical 0.

import numpy as np

from qaf.gadgets import all_spin_states, nor_gadget, verify_gadget
from qaf.ising import energies

g = nor_gadget()
print("h =", g.local.h)
print("J =", dict(g.local.J))

# every configuration of (a, b, out) with its energy
states = all_spin_states(3)
e = energies(g.local, states)
for s, en in sorted(zip(states.tolist(), e), key=lambda t: t[1]):
    bits = [int(v > 0) for v in s]
    tag = "  <- NOR row" if bits[2] == int(not (bits[0] or bits[1])) else ""
    print(f"a={bits[0]} b={bits[1]} out={bits[2]}  E={en:+.1f}{tag}")

# the four truth-table rows sit at -1.5, everything else at least 2 higher
print("levels:", np.unique(e))
report = verify_gadget(g)
print("passed:", report.passed, "gap:", report.gap)
