"""Structural validation and a small-scale numerical equivalence oracle.

The simulator is deliberately dense and simple: little-endian statevectors
up to a configurable width cap (default 12), batched over input columns so
equivalence checks over many basis states stay cheap.  Equivalence is
always up to one fitted global phase.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gates
from .circuit import Circuit, CircuitError, Instruction
from .topology import CouplingMap

DEFAULT_WIDTH_CAP = 12

ALWAYS_ALLOWED = ("measure", "barrier")


@dataclass
class ValidationReport:
    """Outcome of validate_structure: ok iff no violations."""

    violations: list[tuple[str, int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        lines = [f"{kind} at instruction {idx}: {detail}" for kind, idx, detail in self.violations]
        return "\n".join(lines)


def validate_structure(circuit: Circuit, coupling: CouplingMap, basis: list[str]) -> ValidationReport:
    """Flag structural problems of a circuit against a target.

    Checks every 2Q instruction sits on a coupling edge, every gate is in
    the basis (measure/barrier always allowed), nothing has arity >= 3,
    and the circuit fits the device.  Reports rather than raises.
    """
    report = ValidationReport()
    basis_set = set(basis)
    if circuit.num_qubits > coupling.num_nodes:
        report.violations.append(
            ("width_exceeded", -1, f"circuit width {circuit.num_qubits} > {coupling.num_nodes} nodes")
        )
    for idx, ins in enumerate(circuit.instructions):
        name = ins.name
        if name in ALWAYS_ALLOWED:
            continue
        arity = len(ins.qubits)
        if arity >= 3:
            report.violations.append(("arity_violation", idx, f"{name} has arity {arity}"))
            continue
        if name not in basis_set:
            report.violations.append(("non_basis_gate", idx, f"{name} not in basis {sorted(basis_set)}"))
        if arity == 2 and not coupling.has_edge(*ins.qubits):
            report.violations.append(
                ("off_edge_2q", idx, f"{name} on {ins.qubits} is not a coupling edge")
            )
    return report


# -- dense simulation -----------------------------------------------------


class OracleError(CircuitError):
    """The numerical oracle cannot handle this circuit."""


def _check_simulable(circuit: Circuit, max_width: int) -> None:
    if circuit.num_qubits > max_width:
        raise OracleError(f"width {circuit.num_qubits} exceeds oracle cap {max_width}")
    for ins in circuit.instructions:
        if ins.condition is not None:
            raise OracleError("oracle does not support classically conditioned gates")
        if ins.name in ("measure", "reset"):
            raise OracleError(f"oracle does not support '{ins.name}' (strip measurements first)")
        if ins.name != "barrier" and not gates.has_matrix(ins.name):
            raise OracleError(f"no known matrix for gate '{ins.name}'")
        if not ins.gate.is_directive:
            for p in ins.params:
                p.value()  # raises if unbound


def _apply_columns(cols: np.ndarray, circuit: Circuit) -> np.ndarray:
    """Propagate a (2**n, k) column stack through the circuit's unitaries."""
    n = circuit.num_qubits
    k = cols.shape[1]
    state = cols.reshape([2] * n + [k])
    for ins in circuit.instructions:
        if ins.name == "barrier":
            continue
        mat = gates.matrix(ins.name, ins.param_values())
        axes = [n - 1 - q for q in ins.qubits]
        a = len(axes)
        state = np.moveaxis(state, axes, range(a))
        mat = mat.reshape([2] * (2 * a))
        state = np.tensordot(mat, state, axes=(list(range(a, 2 * a)), list(range(a))))
        state = np.moveaxis(state, range(a), axes)
    return state.reshape(2**n, k)


def statevector(circuit: Circuit, max_width: int = DEFAULT_WIDTH_CAP) -> np.ndarray:
    """Amplitudes of the circuit applied to |0...0>, little-endian order."""
    _check_simulable(circuit, max_width)
    n = circuit.num_qubits
    init = np.zeros((2**n, 1), dtype=complex)
    init[0, 0] = 1.0
    out = _apply_columns(init, circuit)[:, 0]
    norm = np.linalg.norm(out)
    if abs(norm - 1.0) > 1e-12:
        raise OracleError(f"statevector norm drifted to {norm}")
    return out


def unitary(circuit: Circuit, max_width: int = DEFAULT_WIDTH_CAP) -> np.ndarray:
    """Full 2**n x 2**n unitary of the circuit."""
    _check_simulable(circuit, max_width)
    n = circuit.num_qubits
    return _apply_columns(np.eye(2**n, dtype=complex), circuit)


def strip_measurements(circuit: Circuit) -> tuple[Circuit, set]:
    """Split off the pre-measurement unitary part and the measure mapping.

    Returns the prefix circuit (all instructions before the first measure,
    minus barriers after it) and the set of (qubit, register, bit) mappings.
    """
    prefix = circuit.copy_empty()
    mapping = set()
    measuring = False
    for ins in circuit.instructions:
        if ins.name == "measure":
            measuring = True
            mapping.add((ins.qubits[0],) + ins.creg_target)
            continue
        if ins.name == "barrier":
            if not measuring:
                prefix.instructions.append(ins)
            continue
        if measuring:
            raise OracleError("gates after measurement are outside the oracle's scope")
        prefix.instructions.append(ins)
    return prefix, mapping


def _permute_columns(cols: np.ndarray, n: int, permutation: list[int]) -> np.ndarray:
    """Relabel wires of a (2**n, k) stack: wire i becomes wire permutation[i]."""
    k = cols.shape[1]
    arr = cols.reshape([2] * n + [k])
    src = [n - 1 - i for i in range(n)]
    dst = [n - 1 - permutation[i] for i in range(n)]
    return np.moveaxis(arr, src, dst).reshape(2**n, k)


def _sample_columns(n: int, seed: int = 7) -> np.ndarray:
    """Input states for equivalence: full basis up to 6 qubits, else 32 products."""
    if n <= 6:
        return np.eye(2**n, dtype=complex)
    rng = np.random.default_rng(seed)
    cols = np.empty((2**n, 32), dtype=complex)
    for j in range(32):
        col = np.array([1.0], dtype=complex)
        for _ in range(n):
            alpha = rng.uniform(0, math.pi)
            beta = rng.uniform(0, 2 * math.pi)
            amp = np.array([math.cos(alpha / 2), math.sin(alpha / 2) * np.exp(1j * beta)])
            col = np.kron(amp, col)
        cols[:, j] = col
    return cols


def _phase_matched_close(expected: np.ndarray, actual: np.ndarray, tol: float) -> bool:
    """True iff actual equals expected up to one global phase, within tol."""
    flat_e = expected.ravel()
    flat_a = actual.ravel()
    pivot = int(np.argmax(np.abs(flat_e)))
    if abs(flat_e[pivot]) < tol:
        return bool(np.max(np.abs(flat_a)) <= tol)
    phase = flat_a[pivot] / flat_e[pivot]
    mag = abs(phase)
    if abs(mag - 1.0) > tol:
        return False
    phase /= mag
    return bool(np.max(np.abs(flat_a - phase * flat_e)) <= tol)


def equivalent_up_to(
    circuit_a: Circuit,
    circuit_b: Circuit,
    permutation: list[int] | None = None,
    tol: float = 1e-9,
    max_width: int = DEFAULT_WIDTH_CAP,
) -> bool:
    """Check circuit_b equals circuit_a once inputs are rewired by permutation.

    ``permutation[i]`` is the wire of circuit_b carrying circuit_a's wire i
    at input time.  Sampled input states are pushed through both circuits
    and compared with a single fitted global phase.  Measurements terminate
    the unitary comparison; their qubit-to-bit mappings must agree under
    the same permutation.
    """
    if circuit_a.num_qubits != circuit_b.num_qubits:
        return False
    n = circuit_a.num_qubits
    if n > max_width:
        raise OracleError(f"width {n} exceeds oracle cap {max_width}")
    perm = list(permutation) if permutation is not None else list(range(n))
    if sorted(perm) != list(range(n)):
        raise OracleError("permutation must be a bijection on wire indices")

    pre_a, map_a = strip_measurements(circuit_a)
    pre_b, map_b = strip_measurements(circuit_b)
    _check_simulable(pre_a, max_width)
    _check_simulable(pre_b, max_width)
    mapped = {(perm[q], reg, bit) for q, reg, bit in map_a}
    if mapped != map_b:
        return False

    cols = _sample_columns(n)
    out_a = _apply_columns(cols, pre_a)
    out_b = _apply_columns(_permute_columns(cols, n, perm), pre_b)
    return _phase_matched_close(out_a, out_b, tol)


def routed_equivalent(
    original: Circuit,
    routed: Circuit,
    initial_layout: dict[int, int],
    final_layout: dict[int, int],
    tol: float = 1e-9,
    max_width: int = 16,
) -> bool:
    """Check a routed/translated physical circuit implements the original.

    The physical circuit may span many more wires than the original; it is
    compacted onto its active wires first.  Inputs are embedded at the
    initial layout, outputs read back at the final layout, and every
    inactive or vacated wire must return to |0>.
    """
    n = original.num_qubits
    pre_orig, map_orig = strip_measurements(original)
    pre_routed, map_routed = strip_measurements(routed)
    mapped = {(final_layout[q], reg, bit) for q, reg, bit in map_orig}
    if mapped != map_routed:
        return False

    active = set()
    for ins in pre_routed.instructions:
        active.update(ins.qubits)
    active.update(initial_layout[q] for q in range(n))
    active.update(final_layout[q] for q in range(n))
    actives = sorted(active)
    m = len(actives)
    if m > max_width:
        raise OracleError(f"routed circuit touches {m} wires, above oracle cap {max_width}")
    compact = {phys: i for i, phys in enumerate(actives)}

    small = Circuit(m, list(pre_routed.cregs))
    for ins in pre_routed.instructions:
        small.instructions.append(
            Instruction(ins.gate, tuple(compact[q] for q in ins.qubits), ins.params)
        )
    _check_simulable(pre_orig, max_width)
    _check_simulable(small, max_width)

    cols = _sample_columns(n)
    out_orig = _apply_columns(cols, pre_orig)
    k = cols.shape[1]

    in_pos = [compact[initial_layout[q]] for q in range(n)]
    out_pos = [compact[final_layout[q]] for q in range(n)]

    embed_in = np.zeros((2**m, k), dtype=complex)
    rows_in = _embedding_rows(n, m, in_pos)
    embed_in[rows_in, :] = cols
    out_routed = _apply_columns(embed_in, small)

    expected = np.zeros((2**m, k), dtype=complex)
    rows_out = _embedding_rows(n, m, out_pos)
    expected[rows_out, :] = out_orig
    return _phase_matched_close(expected, out_routed, tol)


def _embedding_rows(n: int, m: int, positions: list[int]) -> np.ndarray:
    """Row indices in the 2**m space for each 2**n index embedded at positions."""
    idx = np.arange(2**n)
    rows = np.zeros(2**n, dtype=np.int64)
    for i, pos in enumerate(positions):
        rows |= ((idx >> i) & 1) << pos
    return rows
