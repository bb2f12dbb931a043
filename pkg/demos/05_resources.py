# How many qubits and chips a p-bit factoring multiplier needs.

from qaf.compiler import AREA_PER_QUBIT_UM2, CHIP_SIDE_MM, QUBITS_PER_CHIP, estimate_resources

print(f"{CHIP_SIDE_MM} mm chip at {AREA_PER_QUBIT_UM2} um^2 per qubit -> {QUBITS_PER_CHIP} qubits")

for bits in (8, 32, 128):
    est = estimate_resources(bits)
    print(f"{bits:4d} bits: 25p^2 = {est.paper_estimate:>9,d}  compiled = {est.artifact_count:>9,d}"
          f"  widths {est.widths}")

# the 512-bit case takes a few seconds because it counts the real netlist
big = estimate_resources(512)
print(f"512 bits: {big.paper_estimate:,d} qubits, {big.chips} chips "
      f"(compiled multiplier: {big.artifact_count:,d} qubits, {big.artifact_chips} chips)")
