"""The benchmark corpus: circuit families, Hamiltonians, Trotter, twirling.

Run: python demos/corpus_generators.py
"""
from pathlib import Path

from circuitbench import op_counts, two_qubit_depth, two_qubit_gate_count
from circuitbench.generators import (
    decompose_mcx,
    gen_bv,
    gen_dtc,
    gen_ghz,
    gen_trotter,
    load_pauli_hamiltonian,
    pauli_twirl,
    suite_sample,
)
from circuitbench.harness import DEFAULT_HAM_DIR

print("ghz(5):        ", op_counts(gen_ghz(5)))
print("bv('10110'):   ", op_counts(gen_bv("10110")))

# Kicked-Ising chain: 2 cx per bond per step; at 100 qubits x 100 steps
# that is the 19800-entangler twirling workload.
dtc = gen_dtc(100, 100, seed=7)
print("dtc(100,100) cx:", op_counts(dtc)["cx"])

twirled = pauli_twirl(gen_dtc(5, 3, seed=7), seed=9)
small = gen_dtc(5, 3, seed=7)
print("twirl keeps 2Q count/depth:",
      two_qubit_gate_count(twirled) == two_qubit_gate_count(small),
      two_qubit_depth(twirled) == two_qubit_depth(small))

# Multi-controlled X over cx + 1Q, ancillas restored.
for k in (1, 2, 3, 5):
    c = decompose_mcx(k)
    print(f"mcx {k} controls: {c.num_qubits} qubits, {two_qubit_gate_count(c)} cx, depth {two_qubit_depth(c)}")

# Hamiltonian corpus: category-quota sampling, then first-order Trotter.
corpus = [load_pauli_hamiltonian(p) for p in sorted(Path(DEFAULT_HAM_DIR).glob("*.ham"))]
picked = suite_sample(corpus)
by_cat = {}
for h in picked:
    by_cat[h.category] = by_cat.get(h.category, 0) + 1
print("\nsampled corpus by category:", by_cat)

h = picked[0]
circuit = gen_trotter(h, theta_scale=0.1)
print(f"trotter({h.name}): {h.num_qubits} qubits, {len(h.terms)} terms ->",
      f"{two_qubit_gate_count(circuit)} cx")
