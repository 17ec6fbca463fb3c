"""circuitbench: benchmarking harness and circuit toolkit for quantum-circuit compilers."""

__version__ = "0.1.0"

from .circuit import (
    Circuit,
    ClassicalCondition,
    Instruction,
    ParameterExpr,
    bind_parameters,
    full_depth,
    op_counts,
    two_qubit_depth,
    two_qubit_gate_count,
)
from .qasm import emit_qasm, parse_qasm
from .topology import CouplingMap, TopologySpec, all_to_all, heavy_hex, linear, load_device, smallest_fit, square
from .transpiler import TranspileResult, transpile
from .verify import equivalent_up_to, routed_equivalent, statevector, unitary, validate_structure

__all__ = [
    "Circuit",
    "ClassicalCondition",
    "CouplingMap",
    "Instruction",
    "ParameterExpr",
    "TopologySpec",
    "TranspileResult",
    "all_to_all",
    "bind_parameters",
    "emit_qasm",
    "equivalent_up_to",
    "full_depth",
    "heavy_hex",
    "linear",
    "load_device",
    "op_counts",
    "parse_qasm",
    "routed_equivalent",
    "smallest_fit",
    "square",
    "statevector",
    "transpile",
    "two_qubit_depth",
    "two_qubit_gate_count",
    "unitary",
    "validate_structure",
]
