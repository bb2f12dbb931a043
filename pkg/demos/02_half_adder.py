# Compile a half adder from three NOR gadgets and read its truth table
# back out of the ground states.

from qaf import netlist
from qaf.compiler import compile, hardware_check
from qaf.solvers import solve_exact

circuit = netlist.half_adder()
cm = compile(circuit)
print(cm.stats)
print("certified ground energy:", cm.certified_ground_energy)  # 3 gates, 4 wires

# unclamped: the ground manifold is the whole truth table at once
res = solve_exact(cm.model)
A, B = cm.map.register("A")[0], cm.map.register("B")[0]
S, C = cm.map.register("SUM")[0], cm.map.register("CARRY")[0]
for s in res.ground_states:
    print("A B SUM CARRY =", *(int(s[q] > 0) for q in (A, B, S, C)))

# clamping the inputs leaves a unique ground state per row
for a in (0, 1):
    for b in (0, 1):
        r = solve_exact(cm.model, {A: 2 * a - 1, B: 2 * b - 1})
        print(f"{a}+{b} -> sum {int(r.best_state[S] > 0)}, carry {int(r.best_state[C] > 0)}")

print("hardware compliant:", hardware_check(cm).compliant)
