"""Baseline compilation pipeline: lower, place, route, translate, lightly optimize.

The router is intentionally simple: shortest-path swap chains with no
lookahead.  It exists to exercise the harness and metrics with valid,
deterministic output; the interfaces allow a smarter router without any
schema change.  Equivalence is preserved up to the tracked final qubit
permutation and a global phase.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass

import numpy as np

from . import gates
from .circuit import Circuit, CircuitError, Instruction, const
from .generators import decompose_mcx
from .topology import CouplingMap, TopologySpec, build, load_device, smallest_fit
from .verify import validate_structure


class TranspileError(CircuitError):
    """The pipeline cannot process this circuit/target combination."""


class WidthExceededError(TranspileError):
    """Circuit is wider than the target; callers should skip, not fail."""


@dataclass(frozen=True)
class Layout:
    """Partial injective map from logical qubits to physical nodes."""

    mapping: tuple[tuple[int, int], ...]  # (logical, physical) pairs

    @staticmethod
    def from_dict(d: dict[int, int]) -> "Layout":
        values = list(d.values())
        if len(values) != len(set(values)):
            raise TranspileError("layout is not injective")
        return Layout(tuple(sorted(d.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.mapping)

    def physical(self, logical: int) -> int:
        return dict(self.mapping)[logical]


@dataclass
class TranspileResult:
    circuit: Circuit
    initial_layout: Layout
    final_layout: Layout
    swaps_inserted: int
    wall_time_s: float = 0.0


# -- lowering to 1Q/2Q -------------------------------------------------------


def decompose_to_2q(circuit: Circuit) -> Circuit:
    """Rewrite until only 1Q/2Q gates remain.

    ccx expands to the standard 6-cx template, swap to 3 cx, and a named
    ``mcx`` gate to the V-chain construction (appending fresh ancilla
    wires).  Any other gate of arity >= 3 is an error.
    """
    extra = 0
    for ins in circuit.instructions:
        if ins.name == "mcx":
            extra = max(extra, max(0, len(ins.qubits) - 1 - 2))
    out = Circuit(circuit.num_qubits + extra, list(circuit.cregs), [], dict(circuit.metadata))
    anc_base = circuit.num_qubits

    def emit(ins: Instruction) -> None:
        name = ins.name
        if ins.gate.is_directive or len(ins.qubits) <= 2 and name not in ("swap", "ccx"):
            out.instructions.append(ins)
            return
        if name in ("swap", "ccx"):
            for sub, pos, fn in gates.decomposition(name, ins.param_values()):
                out.add(sub, [ins.qubits[p] for p in pos], tuple(const(v) for v in fn), condition=ins.condition)
            return
        if name == "mcx":
            if ins.condition is not None:
                raise TranspileError("cannot decompose a conditioned mcx")
            controls = len(ins.qubits) - 1
            template = decompose_mcx(controls)
            wires = list(ins.qubits[:-1]) + [ins.qubits[-1]]
            wires += [anc_base + i for i in range(template.num_qubits - len(wires))]
            for sub in template.instructions:
                out.add(sub.name, [wires[q] for q in sub.qubits], sub.params)
            return
        raise TranspileError(f"cannot decompose arity-{len(ins.qubits)} gate '{name}'")

    for ins in circuit.instructions:
        emit(ins)
    return out


# -- placement and routing ----------------------------------------------------


def _choose_layout(circuit: Circuit, coupling: CouplingMap, strategy: str) -> dict[int, int]:
    n = circuit.num_qubits
    if strategy == "identity":
        return {q: q for q in range(n)}
    if strategy == "degree_dense":
        busy = [0] * n
        for ins in circuit.instructions:
            if not ins.gate.is_directive and len(ins.qubits) == 2:
                for q in ins.qubits:
                    busy[q] += 1
        logical_order = sorted(range(n), key=lambda q: (-busy[q], q))
        degrees = coupling.degrees()
        physical_order = sorted(range(coupling.num_nodes), key=lambda p: (-degrees[p], p))
        return {l: physical_order[i] for i, l in enumerate(logical_order)}
    raise TranspileError(f"unknown layout strategy '{strategy}'")


def route(circuit: Circuit, coupling: CouplingMap, layout_strategy: str = "identity") -> TranspileResult:
    """Insert swaps so every 2Q gate sits on a coupling edge.

    Swap insertion walks one operand along a BFS shortest path.  The
    output circuit spans the whole device; the final layout records where
    each logical qubit ended up.
    """
    start = time.perf_counter()
    if circuit.num_qubits > coupling.num_nodes:
        raise WidthExceededError(
            f"circuit width {circuit.num_qubits} exceeds device size {coupling.num_nodes}"
        )
    l2p = _choose_layout(circuit, coupling, layout_strategy)
    initial = Layout.from_dict(l2p)
    p2l: dict[int, int | None] = {p: None for p in range(coupling.num_nodes)}
    for l, p in l2p.items():
        p2l[p] = l

    adj = coupling.adjacency()

    def bfs_path(src: int, dst: int) -> list[int]:
        from collections import deque

        prev = {src: src}
        queue = deque([src])
        while queue:
            node = queue.popleft()
            for nxt in adj[node]:
                if nxt not in prev:
                    prev[nxt] = node
                    if nxt == dst:
                        path = [dst]
                        while path[-1] != src:
                            path.append(prev[path[-1]])
                        return path[::-1]
                    queue.append(nxt)
        raise TranspileError(f"no path from {src} to {dst}")

    out = Circuit(coupling.num_nodes, list(circuit.cregs), [], dict(circuit.metadata))
    swaps = 0

    def do_swap(u: int, v: int) -> None:
        nonlocal swaps
        out.add("swap", [u, v])
        swaps += 1
        lu, lv = p2l[u], p2l[v]
        p2l[u], p2l[v] = lv, lu
        if lu is not None:
            l2p[lu] = v
        if lv is not None:
            l2p[lv] = u

    for ins in circuit.instructions:
        if not ins.gate.is_directive and len(ins.qubits) > 2:
            raise TranspileError("route requires a 1Q/2Q circuit (run decompose_to_2q first)")
        if not ins.gate.is_directive and len(ins.qubits) == 2:
            pa, pb = l2p[ins.qubits[0]], l2p[ins.qubits[1]]
            if not coupling.has_edge(pa, pb):
                path = bfs_path(pa, pb)
                for u, v in zip(path, path[1:-1]):
                    do_swap(u, v)
                pa = l2p[ins.qubits[0]]
        mapped = tuple(l2p[q] for q in ins.qubits)
        out.instructions.append(
            Instruction(ins.gate, mapped, ins.params, condition=ins.condition, creg_target=ins.creg_target)
        )
    final = Layout.from_dict({l: p for p, l in p2l.items() if l is not None})
    return TranspileResult(out, initial, final, swaps, time.perf_counter() - start)


# -- basis translation ---------------------------------------------------------


def _zyz_angles(mat: np.ndarray) -> tuple[float, float, float]:
    """ZYZ Euler angles (phi, beta, lam) with mat ~ rz(phi) ry(beta) rz(lam)."""
    det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
    su = mat / cmath.sqrt(det)
    beta = 2.0 * math.atan2(abs(su[1, 0]), abs(su[0, 0]))
    if abs(su[1, 0]) < 1e-13 or abs(su[0, 0]) < 1e-13:
        # Diagonal or antidiagonal: only one angle sum is determined.
        if beta < math.pi / 2:
            return (2.0 * cmath.phase(su[1, 1]), beta, 0.0)
        return (2.0 * cmath.phase(su[1, 0]), beta, 0.0)
    plus = cmath.phase(su[1, 1])
    minus = cmath.phase(su[1, 0])
    return (plus + minus, beta, plus - minus)


def synthesize_1q(mat: np.ndarray, basis: set[str]) -> list[tuple[str, tuple[float, ...]]]:
    """Rewrite a 1Q unitary onto {rz, sx, x}: the rz.sx.rz.sx.rz template.

    Zero-angle layers are dropped, so diagonals become one rz, beta = pi/2
    becomes rz.sx.rz, and beta = pi uses x when available.
    """
    if "rz" not in basis or "sx" not in basis:
        raise TranspileError("1Q synthesis needs rz and sx in the basis")
    phi, beta, lam = _zyz_angles(mat)

    def norm(angle: float) -> float:
        angle = math.remainder(angle, 2.0 * math.pi)
        return 0.0 if abs(angle) < 1e-12 else angle

    seq: list[tuple[str, tuple[float, ...]]] = []

    def rz(angle: float) -> None:
        angle = norm(angle)
        if angle != 0.0:
            seq.append(("rz", (angle,)))

    if abs(beta) < 1e-12:
        rz(phi + lam)
    elif abs(beta - math.pi / 2) < 1e-12:
        rz(lam - math.pi / 2)
        seq.append(("sx", ()))
        rz(phi + math.pi / 2)
    elif abs(beta - math.pi) < 1e-12 and "x" in basis:
        rz(lam + math.pi)  # ry(pi) = x.rz(pi) up to phase
        seq.append(("x", ()))
        rz(phi)
    else:
        rz(lam)
        seq.append(("sx", ()))
        rz(beta + math.pi)
        seq.append(("sx", ()))
        rz(phi + math.pi)
    return seq


def translate_basis(circuit: Circuit, basis: list[str]) -> Circuit:
    """Rewrite every gate into the target basis.

    Gates already in the basis pass through; composite 2Q gates expand via
    their standard-include bodies; cx/cz convert into each other with h
    conjugation; all remaining 1Q gates synthesize from their matrices.
    """
    basis_set = set(basis)
    if not ({"cx", "cz"} & basis_set):
        raise TranspileError(f"basis {basis} lacks a two-qubit entangler")
    out = circuit.copy_empty()

    def emit(name: str, qubits: tuple[int, ...], params: tuple[float, ...], condition) -> None:
        if name in basis_set:
            out.add(name, qubits, tuple(const(p) for p in params), condition=condition)
            return
        arity = len(qubits)
        if arity == 1:
            if not gates.has_matrix(name):
                raise TranspileError(f"cannot translate unknown 1Q gate '{name}'")
            for sub, sub_params in synthesize_1q(gates.matrix(name, params), basis_set):
                out.add(sub, qubits, tuple(const(p) for p in sub_params), condition=condition)
            return
        if name == "cx" and "cz" in basis_set:
            emit("h", (qubits[1],), (), condition)
            emit("cz", qubits, (), condition)
            emit("h", (qubits[1],), (), condition)
            return
        if name == "cz" and "cx" in basis_set:
            emit("h", (qubits[1],), (), condition)
            emit("cx", qubits, (), condition)
            emit("h", (qubits[1],), (), condition)
            return
        if name in gates.DECOMPOSITIONS:
            for sub, pos, fn in gates.decomposition(name, params):
                emit(sub, tuple(qubits[p] for p in pos), fn, condition)
            return
        raise TranspileError(f"cannot translate gate '{name}' to basis {sorted(basis_set)}")

    for ins in circuit.instructions:
        if ins.gate.is_directive:
            out.instructions.append(ins)
            continue
        emit(ins.name, ins.qubits, ins.param_values(), ins.condition)
    return out


# -- light optimization ---------------------------------------------------------


def merge_1q_runs(circuit: Circuit) -> Circuit:
    """Collapse maximal adjacent 1Q runs on each wire into one rz/sx sequence.

    Runs end at 2Q gates, directives, conditioned gates, or gates without
    a known matrix.  A run multiplying to the identity disappears; 2Q
    metrics are unchanged and the unitary is preserved up to phase.
    """
    out = circuit.copy_empty()
    pending: dict[int, list[Instruction]] = {}

    def mergeable(ins: Instruction) -> bool:
        return (
            not ins.gate.is_directive
            and len(ins.qubits) == 1
            and ins.condition is None
            and gates.has_matrix(ins.name)
        )

    def flush(q: int) -> None:
        run = pending.pop(q, [])
        if not run:
            return
        if len(run) == 1:
            out.instructions.append(run[0])
            return
        mat = np.eye(2, dtype=complex)
        for ins in run:
            mat = gates.matrix(ins.name, ins.param_values()) @ mat
        for sub, sub_params in synthesize_1q(mat, {"rz", "sx", "x"}):
            out.add(sub, [q], tuple(const(p) for p in sub_params))

    for ins in circuit.instructions:
        if mergeable(ins):
            pending.setdefault(ins.qubits[0], []).append(ins)
            continue
        touched = ins.qubits if ins.qubits else tuple(pending.keys())
        for q in tuple(touched):
            flush(q)
        out.instructions.append(ins)
    for q in tuple(pending.keys()):
        flush(q)
    return out


# -- pipeline ---------------------------------------------------------------------


DEFAULT_BASIS = ["sx", "x", "rz", "cz"]


def resolve_coupling(spec: TopologySpec, width: int) -> CouplingMap:
    """Materialize a topology spec, fitting the smallest member when unsized."""
    if spec.family == "device":
        return load_device(spec.device_file).coupling
    sized = (
        (spec.family == "linear" and spec.n is not None)
        or (spec.family == "all_to_all" and spec.n is not None)
        or (spec.family == "square" and spec.rows is not None and spec.cols is not None)
        or (spec.family == "heavy_hex" and spec.distance is not None)
    )
    return build(spec) if sized else smallest_fit(spec.family, width)


def transpile(
    circuit: Circuit,
    spec: TopologySpec | CouplingMap,
    basis: list[str] | None = None,
    opt_level: int = 1,
    layout_strategy: str = "identity",
) -> TranspileResult:
    """Full baseline pipeline: decompose, place/route, translate, optimize.

    opt_level 0 skips the 1Q-run merge; level 1 applies it.  The result is
    structurally validated against the target before returning.
    """
    if opt_level not in (0, 1):
        raise TranspileError(f"opt_level must be 0 or 1, got {opt_level}")
    basis = list(basis) if basis is not None else list(DEFAULT_BASIS)
    start = time.perf_counter()
    lowered = decompose_to_2q(circuit)
    coupling = spec if isinstance(spec, CouplingMap) else resolve_coupling(spec, lowered.num_qubits)
    routed = route(lowered, coupling, layout_strategy)
    translated = translate_basis(routed.circuit, basis)
    if opt_level >= 1 and {"rz", "sx"} <= set(basis):
        translated = merge_1q_runs(translated)
    translated.metadata["opt_level"] = str(opt_level)
    report = validate_structure(translated, coupling, basis)
    if not report.ok:
        raise TranspileError(f"pipeline produced an invalid circuit:\n{report}")
    return TranspileResult(
        translated,
        routed.initial_layout,
        routed.final_layout,
        routed.swaps_inserted,
        time.perf_counter() - start,
    )


# -- timing estimates ----------------------------------------------------------------


DEFAULT_SHOTS = 4096


def schedule_duration(circuit: Circuit, durations: dict[str, float]) -> float:
    """Critical-path duration over the dependency DAG with per-gate durations.

    Barriers synchronize at zero cost; every other instruction (including
    measure) must have a duration entry.
    """
    clock: dict = {}

    def resources(ins: Instruction) -> list:
        res: list = list(ins.qubits)
        if ins.name == "barrier" and not ins.qubits:
            res = list(range(circuit.num_qubits))
        if ins.condition is not None:
            res.append(("c", ins.condition.register))
        if ins.creg_target is not None:
            res.append(("c", ins.creg_target[0]))
        return res

    total = 0.0
    for ins in circuit.instructions:
        res = resources(ins)
        ready = max((clock.get(r, 0.0) for r in res), default=0.0)
        if ins.name == "barrier":
            dur = 0.0
        elif ins.name in durations:
            dur = durations[ins.name]
        else:
            raise TranspileError(f"no duration entry for gate '{ins.name}'")
        done = ready + dur
        for r in res:
            clock[r] = done
        total = max(total, done)
    return total


def execution_time_estimate(duration: float, shots: int = DEFAULT_SHOTS, rep_delay: float = 0.0) -> float:
    """Total hardware time: shots x (circuit duration + inter-shot delay)."""
    if shots < 1:
        raise TranspileError("shots must be >= 1")
    return shots * (duration + rep_delay)
