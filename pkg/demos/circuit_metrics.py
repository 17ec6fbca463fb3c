"""Build circuits and read off the metrics the benchmark reports.

Run: python demos/circuit_metrics.py
"""
from circuitbench import Circuit, bind_parameters, full_depth, op_counts, two_qubit_depth, two_qubit_gate_count
from circuitbench.circuit import ParameterExpr
from circuitbench.generators import gen_efficient_su2, gen_qv

# A small hand-built circuit: three entanglers, two of them parallel.
c = Circuit(4)
c.add("h", [0])
c.add("cx", [0, 1])
c.add("cx", [2, 3])
c.add("cx", [1, 2])

print("op counts:        ", op_counts(c))
print("2Q gate count:    ", two_qubit_gate_count(c))
print("2Q depth:         ", two_qubit_depth(c))  # 2: the parallel pair shares a layer
print("full depth:       ", full_depth(c))

# Quantum-volume circuits have 3 cx per block, floor(n/2) blocks per layer.
qv = gen_qv(6, 6, seed=1)
print("\nQV(6,6) cx count: ", op_counts(qv)["cx"])
print("QV(6,6) 2Q depth: ", two_qubit_depth(qv))

# Parameterized ansatz: 2*n*(reps+1) free symbols, bound without changing shape.
ansatz = gen_efficient_su2(4, reps=2)
print("\nansatz symbols:   ", len(ansatz.free_symbols))
bound = bind_parameters(ansatz, {s: 0.5 for s in ansatz.free_symbols})
assert op_counts(bound) == op_counts(ansatz)
print("bound symbols:    ", len(bound.free_symbols))

# Affine parameter expressions bind exactly.
expr = ParameterExpr(symbol="theta", mult=2.0, const=1.0)
rz = Circuit(1).add("rz", [0], (expr,))
print("rz(2*theta+1) at theta=0.5 ->", bind_parameters(rz, {"theta": 0.5}).instructions[0].params[0].value())
