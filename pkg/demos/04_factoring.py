# Run a multiplier circuit forwards, then backwards: clamp the product
# and let the annealer find the factors.

from qaf.factoring import FactorProblem, compiled_multiplier, enumerate_factorizations, factor_qa, multiply_qa

print("3 x 5 =", multiply_qa(3, 5, (2, 3), seed=0))

cm = compiled_multiplier(4, 5)
print(f"multiplier(4, 5): {cm.model.n} qubits, ground {cm.certified_ground_energy}")

for P in (15, 21, 35):
    r = factor_qa(FactorProblem(P, seed=0))
    print(f"{P} = {r.m} x {r.n}  (attempts: {r.attempts})")

# small registers can be searched exhaustively: every ground state is a factor pair
# (12 comes back empty because 3 x 4 needs a 3-bit register)
for P in (4, 6, 9, 12):
    print(P, sorted(enumerate_factorizations(P, (2, 2))))
