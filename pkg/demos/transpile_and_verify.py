"""The baseline pipeline end to end, with the numerical equivalence oracle.

Run: python demos/transpile_and_verify.py
"""
from circuitbench import TopologySpec, transpile, two_qubit_depth, two_qubit_gate_count, validate_structure
from circuitbench.generators import gen_qv
from circuitbench.transpiler import DEFAULT_BASIS, resolve_coupling
from circuitbench.verify import routed_equivalent

circuit = gen_qv(5, 3, seed=42)
print(f"input: {circuit.num_qubits} qubits, {two_qubit_gate_count(circuit)} cx, "
      f"2Q depth {two_qubit_depth(circuit)}\n")

for family in ("all_to_all", "square", "heavy_hex", "linear"):
    spec = TopologySpec(family)
    result = transpile(circuit, spec)
    target = resolve_coupling(spec, circuit.num_qubits)
    report = validate_structure(result.circuit, target, DEFAULT_BASIS)
    equivalent = routed_equivalent(
        circuit,
        result.circuit,
        result.initial_layout.as_dict(),
        result.final_layout.as_dict(),
        tol=1e-9,
        max_width=16,
    )
    print(f"{family:<11} {target.num_nodes:>3} nodes | swaps {result.swaps_inserted:>2} | "
          f"2Q {two_qubit_gate_count(result.circuit):>3} | depth {two_qubit_depth(result.circuit):>3} | "
          f"valid {report.ok} | equivalent {equivalent} | {result.wall_time_s*1e3:.1f} ms")
