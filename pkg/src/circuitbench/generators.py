"""Benchmark corpus generators.

Circuit families exercised by the construction/manipulation workouts plus
the Hamiltonian-evolution inputs: quantum-volume squares, Bernstein-
Vazirani, GHZ, layered Cliffords, hardware-efficient ansatz, kicked-Ising
chains, first-order Trotter circuits, multi-controlled-X decomposition,
and Pauli twirling.  Every generator is a deterministic function of its
arguments and seed.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

from . import gates
from .circuit import Circuit, ParameterExpr, const

# Kicked-Ising defaults: transverse kick strength and disorder windows.
DTC_KICK = 0.95
DTC_PHI_RANGE = (-1.5 * math.pi, -0.5 * math.pi)
DTC_H_RANGE = (-math.pi, math.pi)


class GeneratorError(ValueError):
    """Invalid generator arguments or corpus data."""


# -- circuit families ------------------------------------------------------


def gen_qv(n: int, layers: int, seed: int = 0) -> Circuit:
    """Quantum-volume style square circuit.

    Each layer permutes the qubits (seeded) and applies floor(n/2)
    two-qubit blocks in the canonical 3-CX SU(4) template with seeded
    random 1Q rotations.
    """
    if n < 2:
        raise GeneratorError("gen_qv needs n >= 2")
    rng = random.Random(seed)
    c = Circuit(n)

    def rot(q: int) -> None:
        c.add("rz", [q], (const(rng.uniform(0, 2 * math.pi)),))
        c.add("ry", [q], (const(rng.uniform(0, math.pi)),))
        c.add("rz", [q], (const(rng.uniform(0, 2 * math.pi)),))

    for _ in range(layers):
        perm = list(range(n))
        rng.shuffle(perm)
        for b in range(n // 2):
            a, t = perm[2 * b], perm[2 * b + 1]
            rot(a)
            rot(t)
            c.add("cx", [a, t])
            rot(a)
            rot(t)
            c.add("cx", [a, t])
            rot(a)
            rot(t)
            c.add("cx", [a, t])
            rot(a)
            rot(t)
    return c


def gen_bv(secret: str) -> Circuit:
    """Bernstein-Vazirani oracle circuit over len(secret)+1 qubits.

    The ancilla is the last qubit; cx count equals the number of 1-bits.
    """
    if not secret or any(ch not in "01" for ch in secret):
        raise GeneratorError("secret must be a nonempty bitstring")
    n = len(secret)
    c = Circuit(n + 1)
    c.add("x", [n])
    c.add("h", [n])
    for q in range(n):
        c.add("h", [q])
    # secret[0] is qubit 0
    for q, bit in enumerate(secret):
        if bit == "1":
            c.add("cx", [q, n])
    for q in range(n):
        c.add("h", [q])
    return c


def gen_ghz(n: int) -> Circuit:
    """GHZ state preparation: h plus a cx chain."""
    if n < 1:
        raise GeneratorError("gen_ghz needs n >= 1")
    c = Circuit(n)
    c.add("h", [0])
    for q in range(n - 1):
        c.add("cx", [q, q + 1])
    return c


_CLIFFORD_1Q = ("h", "s", "sdg", "x", "z")


def gen_clifford_layers(n: int, depth: int, seed: int = 0) -> Circuit:
    """Layered random Clifford circuit.

    Each layer draws one of {h, s, sdg, x, z} per qubit followed by cx
    gates on a seeded random matching of the qubits.
    """
    if n < 1:
        raise GeneratorError("gen_clifford_layers needs n >= 1")
    rng = random.Random(seed)
    c = Circuit(n)
    for _ in range(depth):
        for q in range(n):
            c.add(rng.choice(_CLIFFORD_1Q), [q])
        order = list(range(n))
        rng.shuffle(order)
        for i in range(0, n - 1, 2):
            c.add("cx", [order[i], order[i + 1]])
    return c


def gen_efficient_su2(n: int, reps: int, seed: int = 0) -> Circuit:
    """Hardware-efficient ansatz: ry+rz rotation layers with circular cx entanglement.

    Produces 2*n*(reps+1) distinct free symbols named t0..t{k}; the seed is
    accepted for interface uniformity but the structure is deterministic.
    """
    if n < 2:
        raise GeneratorError("gen_efficient_su2 needs n >= 2")
    c = Circuit(n)
    sym = 0

    def rotation_layer() -> None:
        nonlocal sym
        for q in range(n):
            c.add("ry", [q], (ParameterExpr(symbol=f"t{sym}"),))
            sym += 1
        for q in range(n):
            c.add("rz", [q], (ParameterExpr(symbol=f"t{sym}"),))
            sym += 1

    rotation_layer()
    for _ in range(reps):
        for q in range(n):
            c.add("cx", [q, (q + 1) % n])
        rotation_layer()
    return c


def gen_dtc(n: int, steps: int, seed: int = 0) -> Circuit:
    """Kicked-Ising chain (discrete time crystal style) circuit.

    Per step: rx(0.95*pi) on every qubit, an rzz on each chain bond lowered
    to cx-rz-cx, and a per-qubit rz disorder field.  The disorder is
    quenched: bond and field angles are drawn once per seed and reused in
    every step, giving 2*(n-1)*steps cx gates.
    """
    if n < 2:
        raise GeneratorError("gen_dtc needs n >= 2")
    rng = random.Random(seed)
    phis = [rng.uniform(*DTC_PHI_RANGE) for _ in range(n - 1)]
    hs = [rng.uniform(*DTC_H_RANGE) for _ in range(n)]
    c = Circuit(n)
    for _ in range(steps):
        for q in range(n):
            c.add("rx", [q], (const(DTC_KICK * math.pi),))
        for b in range(n - 1):
            c.add("cx", [b, b + 1])
            c.add("rz", [b + 1], (const(phis[b]),))
            c.add("cx", [b, b + 1])
        for q in range(n):
            c.add("rz", [q], (const(hs[q]),))
    return c


# -- Hamiltonians and Trotterization ---------------------------------------


@dataclass(frozen=True)
class PauliTerm:
    pauli: str  # over {I,X,Y,Z}, length = qubit count
    coefficient: float

    def __post_init__(self) -> None:
        if not self.pauli or any(ch not in "IXYZ" for ch in self.pauli):
            raise GeneratorError(f"bad Pauli string {self.pauli!r}")

    @property
    def support(self) -> list[int]:
        return [i for i, ch in enumerate(self.pauli) if ch != "I"]


@dataclass(frozen=True)
class Hamiltonian:
    num_qubits: int
    terms: tuple[PauliTerm, ...]
    category: str  # chemistry | condensed_matter | discrete_opt | binary_opt
    name: str

    CATEGORIES = ("chemistry", "condensed_matter", "discrete_opt", "binary_opt")

    def __post_init__(self) -> None:
        for term in self.terms:
            if len(term.pauli) != self.num_qubits:
                raise GeneratorError(
                    f"term {term.pauli} length != num_qubits {self.num_qubits} in {self.name}"
                )
        if self.category not in self.CATEGORIES:
            raise GeneratorError(f"unknown category {self.category!r} in {self.name}")


def gen_trotter(h: Hamiltonian, theta_scale: float = 1.0, reps: int = 1) -> Circuit:
    """First-order Trotter circuit for exp(-i * theta_scale * H), repeated reps times.

    Per term: conjugate X/Y supports into the Z basis, chain parities onto
    the last support qubit with a cx ladder, rotate rz(2*coeff*theta_scale),
    then undo the ladder and conjugation.  Terms are applied in order.
    """
    c = Circuit(h.num_qubits)
    for _ in range(reps):
        for term in h.terms:
            support = term.support
            if not support:
                raise GeneratorError(f"all-identity term in {h.name}")
            for q in support:
                ch = term.pauli[q]
                if ch == "X":
                    c.add("h", [q])
                elif ch == "Y":
                    c.add("sdg", [q])
                    c.add("h", [q])
            for a, b in zip(support, support[1:]):
                c.add("cx", [a, b])
            c.add("rz", [support[-1]], (const(2.0 * term.coefficient * theta_scale),))
            for a, b in reversed(list(zip(support, support[1:]))):
                c.add("cx", [a, b])
            for q in reversed(support):
                ch = term.pauli[q]
                if ch == "X":
                    c.add("h", [q])
                elif ch == "Y":
                    c.add("h", [q])
                    c.add("s", [q])
    return c


# -- multi-controlled X -----------------------------------------------------


def _append_ccx_template(c: Circuit, a: int, b: int, t: int) -> None:
    for name, pos, fn in gates.DECOMPOSITIONS["ccx"]:
        c.add(name, [(a, b, t)[p] for p in pos], tuple(const(v) for v in fn()))


def decompose_mcx(num_controls: int) -> Circuit:
    """Multi-controlled X over {cx, 1Q} via the V-chain construction.

    Layout: controls 0..k-1, target k, then k-2 ancillas (for k >= 3)
    which are returned to |0>.  Toffolis are lowered to the standard
    6-cx template.
    """
    if num_controls < 1:
        raise GeneratorError("decompose_mcx needs num_controls >= 1")
    k = num_controls
    if k == 1:
        return Circuit(2).add("cx", [0, 1])
    target = k
    if k == 2:
        c = Circuit(3)
        _append_ccx_template(c, 0, 1, target)
        return c
    num_anc = k - 2
    c = Circuit(k + 1 + num_anc)
    anc = [k + 1 + i for i in range(num_anc)]
    compute: list[tuple[int, int, int]] = [(0, 1, anc[0])]
    for i in range(k - 3):
        compute.append((2 + i, anc[i], anc[i + 1]))
    for a, b, t in compute:
        _append_ccx_template(c, a, b, t)
    _append_ccx_template(c, k - 1, anc[-1], target)
    for a, b, t in reversed(compute):
        _append_ccx_template(c, a, b, t)
    return c


# -- Pauli twirling ----------------------------------------------------------


_PAULI_NAMES = ("id", "x", "y", "z")


def _twirl_table(gate_name: str) -> dict[tuple[str, str], tuple[str, str]]:
    """Post-Pauli pair for each pre-Pauli pair, found by 4x4 matrix search."""
    g = gates.matrix(gate_name)
    table: dict[tuple[str, str], tuple[str, str]] = {}
    for p0 in _PAULI_NAMES:
        for p1 in _PAULI_NAMES:
            pre = np.kron(gates.matrix(p0), gates.matrix(p1))
            want = g @ pre @ np.conjugate(g.T)  # dressed = g.pre.g^dagger, so post = want
            for q0 in _PAULI_NAMES:
                for q1 in _PAULI_NAMES:
                    post = np.kron(gates.matrix(q0), gates.matrix(q1))
                    overlap = abs(np.trace(np.conjugate(post.T) @ want)) / 4.0
                    if abs(overlap - 1.0) < 1e-12:
                        table[(p0, p1)] = (q0, q1)
                        break
                else:
                    continue
                break
            else:
                raise GeneratorError(f"no twirl partner for {gate_name} with pre ({p0},{p1})")
    return table


TWIRL_TABLES: dict[str, dict[tuple[str, str], tuple[str, str]]] = {
    "cx": _twirl_table("cx"),
    "cz": _twirl_table("cz"),
}


def pauli_twirl(circuit: Circuit, seed: int = 0) -> Circuit:
    """Dress every cx/cz with a random pre-Pauli pair and its matching post pair.

    The dressed gate equals the bare gate up to global phase, so the
    circuit's action and its two-qubit metrics are unchanged.  Identity
    Paulis are not materialized as gates.
    """
    rng = random.Random(seed)
    out = circuit.copy_empty()
    for ins in circuit.instructions:
        if not ins.gate.is_directive and len(ins.qubits) == 2:
            if ins.name not in TWIRL_TABLES:
                raise GeneratorError(f"cannot twirl 2Q gate '{ins.name}' (only cx, cz)")
            if ins.condition is not None:
                raise GeneratorError("cannot twirl a classically conditioned gate")
            pre = (rng.choice(_PAULI_NAMES), rng.choice(_PAULI_NAMES))
            post = TWIRL_TABLES[ins.name][pre]
            for name, q in zip(pre, ins.qubits):
                if name != "id":
                    out.add(name, [q])
            out.instructions.append(ins)
            for name, q in zip(post, ins.qubits):
                if name != "id":
                    out.add(name, [q])
        else:
            out.instructions.append(ins)
    return out


# -- Hamiltonian corpus I/O ---------------------------------------------------


def load_pauli_hamiltonian(path: str | Path) -> Hamiltonian:
    """Read a Hamiltonian file: header lines then one (pauli, coeff) per line.

    Header keys are ``name:``, ``category:``, ``num_qubits:``; blank lines
    and ``#`` comments are ignored.
    """
    path = Path(path)
    name = category = None
    num_qubits = None
    terms: list[PauliTerm] = []
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line and line.split(":", 1)[0].strip() in ("name", "category", "num_qubits"):
            key, value = (part.strip() for part in line.split(":", 1))
            if key == "name":
                name = value
            elif key == "category":
                category = value
            else:
                num_qubits = int(value)
            continue
        fields = line.split()
        if len(fields) != 2:
            raise GeneratorError(f"{path}: bad term line {raw!r}")
        terms.append(PauliTerm(fields[0], float(fields[1])))
    if name is None or category is None or num_qubits is None:
        raise GeneratorError(f"{path}: missing header fields")
    return Hamiltonian(num_qubits, tuple(terms), category, name)


def suite_sample(
    corpus: list[Hamiltonian],
    max_qubits: int = 1092,
    max_terms: int = 10000,
    quotas: tuple[int, int, int, int] = (35, 35, 15, 15),
    seed: int = 0,
) -> list[Hamiltonian]:
    """Deterministic category-quota sample of a Hamiltonian corpus.

    Entries above the qubit or term caps are dropped first.  Quotas apply
    per category in the order (chemistry, condensed_matter, discrete_opt,
    binary_opt) and are scaled down proportionally when the corpus is
    smaller than the total quota.  Duplicate names are rejected.
    """
    if any(q < 0 for q in quotas):
        raise GeneratorError("quotas must be nonnegative")
    eligible = [h for h in corpus if h.num_qubits <= max_qubits and len(h.terms) <= max_terms]
    names = [h.name for h in eligible]
    if len(names) != len(set(names)):
        raise GeneratorError("duplicate Hamiltonian names in corpus")
    if not eligible:
        logger.warning(
            "no Hamiltonians within caps (max_qubits=%d, max_terms=%d); empty selection",
            max_qubits,
            max_terms,
        )
        return []
    total_quota = sum(quotas)
    if total_quota == 0:
        raise GeneratorError("infeasible quotas: all zero")
    scale = min(1.0, len(eligible) / total_quota)
    scaled = [round(q * scale) for q in quotas]
    rng = random.Random(seed)
    picked: list[Hamiltonian] = []
    for category, want in zip(Hamiltonian.CATEGORIES, scaled):
        pool = sorted((h for h in eligible if h.category == category), key=lambda h: h.name)
        take = min(want, len(pool))
        picked.extend(rng.sample(pool, take) if take < len(pool) else pool)
    return sorted(picked, key=lambda h: h.name)
