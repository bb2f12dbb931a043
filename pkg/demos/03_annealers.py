# Simulated annealing and simulated quantum annealing on a clamped
# full adder, checked against exhaustive search.

from qaf import netlist
from qaf.compiler import compile
from qaf.solvers import AnnealSchedule, solve_exact, solve_sa, solve_sqa

cm = compile(netlist.full_adder())
a, b, cin = cm.map.inputs
clamps = {a: 1, b: 1, cin: -1}  # 1 + 1 + 0

exact = solve_exact(cm.model, clamps)
print("exact ground:", exact.best_energy, "states:", len(exact.ground_states))

sa = solve_sa(cm.model, clamps, seed=1)
print("SA:", sa.best_energy, f"({sa.num_restarts_hit_best}/20 restarts hit it)")

sqa = solve_sqa(cm.model, clamps, seed=1)
print("SQA:", sqa.best_energy)

# a schedule that is far too short usually stalls above the ground
quick = AnnealSchedule(sweeps=2, beta_start=0.05, beta_end=0.1)
print("rushed SA:", solve_sa(cm.model, clamps, quick, restarts=1, seed=1).best_energy)

s, cout = cm.map.outputs
print("sum", int(sa.best_state[s] > 0), "carry", int(sa.best_state[cout] > 0))
