#!/usr/bin/env python3
"""Regenerate the bundled data corpus (QASM files, Hamiltonians, device file).

Everything is seeded, so rerunning reproduces the shipped files exactly:

    python tools/make_corpus.py
"""
from __future__ import annotations

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from circuitbench.circuit import Circuit, ClassicalCondition
from circuitbench.generators import (
    Hamiltonian,
    PauliTerm,
    decompose_mcx,
    gen_bv,
    gen_clifford_layers,
    gen_dtc,
    gen_efficient_su2,
    gen_ghz,
    gen_qv,
)
from circuitbench.circuit import bind_parameters
from circuitbench.qasm import emit_qasm

DATA = Path(__file__).parent.parent / "src" / "circuitbench" / "data"


def write_qasm(name: str, circuit) -> None:
    (DATA / "qasm" / f"{name}.qasm").write_text(emit_qasm(circuit))


def su2_bound(n: int, reps: int, seed: int):
    c = gen_efficient_su2(n, reps)
    rng = random.Random(seed)
    return bind_parameters(c, {s: rng.uniform(0, 6.2831853) for s in c.free_symbols})


def make_qasm_corpus() -> int:
    count = 0

    def emit(name, circuit):
        nonlocal count
        write_qasm(name, circuit)
        count += 1

    for n in (3, 4, 5, 6, 8, 10, 12, 16, 24, 48, 100, 433):
        emit(f"ghz-{n}", gen_ghz(n))
    rng = random.Random(99)
    for n in (3, 4, 5, 6, 8, 10, 12, 16):
        for s in (1, 2):
            secret = "".join(rng.choice("01") for _ in range(n))
            if "1" not in secret:
                secret = "1" + secret[1:]
            emit(f"bv-{n}-s{s}", gen_bv(secret))
    for n in range(3, 11):
        for s in (1, 2, 3):
            emit(f"qv-{n}-s{s}", gen_qv(n, n, seed=s))
    for n in (3, 4, 5, 6, 8, 10, 12, 16):
        for s in (1, 2, 3):
            emit(f"cliff-{n}-s{s}", gen_clifford_layers(n, n, seed=s))
    for n in range(3, 11):
        for reps in (1, 2, 3):
            emit(f"su2-{n}-r{reps}", su2_bound(n, reps, seed=n * 10 + reps))
    for n in (3, 4, 5, 6, 8, 10, 12, 16):
        emit(f"dtc-{n}", gen_dtc(n, 4, seed=n))
    for k in (2, 3, 4, 5, 6):
        emit(f"mcx-{k}", decompose_mcx(k))

    # a few circuits with measurements and conditions
    g = gen_ghz(5)
    g.cregs.append(("m", 5))
    for q in range(5):
        g.add("measure", [q], creg_target=("m", q))
    emit("ghzm-5", g)

    b = gen_bv("1011")
    b.cregs.append(("out", 4))
    for q in range(4):
        b.add("measure", [q], creg_target=("out", q))
    emit("bvm-4", b)

    c = Circuit(3, [("f", 2)])
    c.add("h", [0])
    c.add("measure", [0], creg_target=("f", 0))
    c.add("x", [1], condition=ClassicalCondition("f", 1))
    c.add("cx", [1, 2], condition=ClassicalCondition("f", 1))
    emit("cond-3", c)
    return count


def make_import_files() -> None:
    out = DATA / "qasm_import"
    out.mkdir(parents=True, exist_ok=True)
    (out / "qv100.qasm").write_text(emit_qasm(gen_qv(100, 100, seed=2024)))

    value = 2**300
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        "qreg q[1];",
        "creg c[301];",
        "x q[0];",
        "measure q[0] -> c[0];",
        f"if (c=={value}) x q[0];",
    ]
    (out / "bigint301.qasm").write_text("\n".join(lines) + "\n")


def write_ham(h: Hamiltonian) -> None:
    lines = [f"name: {h.name}", f"category: {h.category}", f"num_qubits: {h.num_qubits}"]
    for term in h.terms:
        lines.append(f"{term.pauli} {term.coefficient:.12g}")
    (DATA / "hamiltonians" / f"{h.name}.ham").write_text("\n".join(lines) + "\n")


def _pauli(n: int, ops: dict[int, str]) -> str:
    return "".join(ops.get(i, "I") for i in range(n))


def make_hamiltonians() -> int:
    count = 0

    def emit(h):
        nonlocal count
        write_ham(h)
        count += 1

    rng = random.Random(1234)
    # chemistry-flavored: random one- and two-local terms with mixed paulis
    for i, n in enumerate((4, 5, 6, 7, 8, 10, 12)):
        terms = []
        for q in range(n):
            terms.append(PauliTerm(_pauli(n, {q: "Z"}), rng.uniform(-1.0, 1.0)))
        for _ in range(2 * n):
            a, b = rng.sample(range(n), 2)
            pa, pb = rng.choice("XYZ"), rng.choice("XYZ")
            terms.append(PauliTerm(_pauli(n, {a: pa, b: pb}), rng.uniform(-0.5, 0.5)))
        emit(Hamiltonian(n, tuple(terms), "chemistry", f"chem-rand-{n}"))

    # condensed matter: transverse-field Ising chains and Heisenberg chains
    for n in (4, 6, 8, 10, 12):
        terms = [PauliTerm(_pauli(n, {q: "X"}), 1.0) for q in range(n)]
        terms += [PauliTerm(_pauli(n, {q: "Z", q + 1: "Z"}), -1.0) for q in range(n - 1)]
        emit(Hamiltonian(n, tuple(terms), "condensed_matter", f"tfim-{n}"))
    for n in (6, 8):
        terms = []
        for q in range(n - 1):
            for p in "XYZ":
                terms.append(PauliTerm(_pauli(n, {q: p, q + 1: p}), 0.25))
        emit(Hamiltonian(n, tuple(terms), "condensed_matter", f"heis-{n}"))

    # discrete optimization: maxcut on random graphs
    for n in (6, 8, 10):
        edges = set()
        while len(edges) < 2 * n - 3:
            a, b = rng.sample(range(n), 2)
            edges.add((min(a, b), max(a, b)))
        terms = [PauliTerm(_pauli(n, {a: "Z", b: "Z"}), 0.5) for a, b in sorted(edges)]
        emit(Hamiltonian(n, tuple(terms), "discrete_opt", f"maxcut-{n}"))

    # binary optimization: dense QUBO-style
    for n in (5, 7, 9):
        terms = [PauliTerm(_pauli(n, {q: "Z"}), rng.uniform(-2.0, 2.0)) for q in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                if rng.random() < 0.6:
                    terms.append(PauliTerm(_pauli(n, {a: "Z", b: "Z"}), rng.uniform(-1.0, 1.0)))
        emit(Hamiltonian(n, tuple(terms), "binary_opt", f"qubo-{n}"))
    return count


def make_device() -> None:
    """133-node heavy-hex style device: 7 rows of 15 plus 28 bridge qubits."""
    rows, cols = 7, 15
    node = lambda r, c: r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols - 1):
            edges.append([node(r, c), node(r, c + 1)])
    nxt = rows * cols
    for gap in range(rows - 1):
        if gap % 2 == 0:
            columns = [0, 4, 8, 12, 14]
        elif gap == 1:
            columns = [0, 2, 6, 10, 14]
        else:
            columns = [2, 6, 10, 14]
        for c in columns:
            edges.append([node(gap, c), nxt])
            edges.append([nxt, node(gap + 1, c)])
            nxt += 1
    doc = {
        "name": "hex133",
        "num_qubits": nxt,
        "edges": edges,
        "gate_durations": {
            "sx": 3.2e-8,
            "x": 3.2e-8,
            "rz": 1e-9,
            "cz": 6.8e-8,
            "measure": 1.4e-6,
            "reset": 1.0e-6,
        },
        "rep_delay": 2.5e-4,
    }
    out = DATA / "devices"
    out.mkdir(parents=True, exist_ok=True)
    (out / "hex133.json").write_text(json.dumps(doc, indent=1) + "\n")
    assert nxt == 133, nxt


def make_default_conf() -> None:
    text = """\
# Example run configuration; every key shown here is the default.
[general]
timeout = 3600

[transpile]
topologies = all_to_all, square, heavy_hex, linear
basis_gates = sx, x, rz, cz
opt_level = 1

[worker.builtin]
# The builtin worker needs no exec line; external workers do, e.g.:
# [worker.myadapter]
# exec = python3 path/to/adapter.py
"""
    (DATA / "default.conf").write_text(text)


def main() -> None:
    (DATA / "qasm").mkdir(parents=True, exist_ok=True)
    (DATA / "hamiltonians").mkdir(parents=True, exist_ok=True)
    nq = make_qasm_corpus()
    nh = make_hamiltonians()
    make_import_files()
    make_device()
    make_default_conf()
    print(f"qasm files: {nq}; hamiltonians: {nh}; corpus entries: {nq + nh}")
    print(f"abstract pairs over 4 families: {(nq + nh) * 4}")


if __name__ == "__main__":
    main()
