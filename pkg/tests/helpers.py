"""Shared test utilities: independent oracles and random circuit builders.

The oracles here deliberately avoid the library's clock-based metric code:
they build the dependency DAG explicitly and take longest paths, so the
two paths to the same number stay independent.
"""
from __future__ import annotations

import random

from circuitbench.circuit import Circuit, ClassicalCondition


def touched(circuit: Circuit, ins) -> tuple[set, set]:
    qubits = set(ins.qubits)
    if ins.name == "barrier" and not ins.qubits:
        qubits = set(range(circuit.num_qubits))
    regs = set()
    if ins.condition is not None:
        regs.add(ins.condition.register)
    if ins.creg_target is not None:
        regs.add(ins.creg_target[0])
    return qubits, regs


def oracle_two_qubit_depth(circuit: Circuit) -> int:
    """Brute-force longest path in the dependency DAG counting only 2Q gates."""
    ins_list = circuit.instructions
    touches = [touched(circuit, ins) for ins in ins_list]
    best = [0] * len(ins_list)
    answer = 0
    for j, ins in enumerate(ins_list):
        qj, rj = touches[j]
        weight = 1 if (not ins.gate.is_directive and len(ins.qubits) == 2) else 0
        longest = 0
        for i in range(j):
            qi, ri = touches[i]
            if (qi & qj) or (ri & rj):
                longest = max(longest, best[i])
        best[j] = longest + weight
        answer = max(answer, best[j])
    return answer


def oracle_full_depth(circuit: Circuit) -> int:
    """Longest path counting every non-barrier instruction as one layer."""
    ins_list = circuit.instructions
    touches = []
    for ins in ins_list:
        if ins.name == "barrier":
            touches.append((set(range(circuit.num_qubits)), set()))
        else:
            touches.append(touched(circuit, ins))
    best = [0] * len(ins_list)
    answer = 0
    for j, ins in enumerate(ins_list):
        qj, rj = touches[j]
        weight = 0 if ins.name == "barrier" else 1
        longest = 0
        for i in range(j):
            qi, ri = touches[i]
            if (qi & qj) or (ri & rj):
                longest = max(longest, best[i])
        best[j] = longest + weight
        answer = max(answer, best[j])
    return answer


_ONE_Q = ("h", "x", "z", "s", "sdg", "t", "sx")
_ROT = ("rx", "ry", "rz")


def random_circuit(
    rng: random.Random,
    max_qubits: int = 8,
    max_gates: int = 60,
    allow_directives: bool = False,
    measure_free: bool = True,
) -> Circuit:
    """Seeded random 1Q/2Q circuit, optionally with barriers and conditions."""
    n = rng.randint(2, max_qubits)
    cregs = [("c", n)] if allow_directives else []
    c = Circuit(n, cregs)
    measured = False
    for _ in range(rng.randint(1, max_gates)):
        roll = rng.random()
        if allow_directives and roll < 0.06:
            qubits = rng.sample(range(n), rng.randint(1, n))
            c.add("barrier", qubits)
        elif allow_directives and roll < 0.10 and not measure_free:
            q = rng.randrange(n)
            c.add("measure", [q], creg_target=("c", q))
            measured = True
        elif allow_directives and roll < 0.14 and measured:
            q = rng.randrange(n)
            c.add("x", [q], condition=ClassicalCondition("c", rng.randrange(2**n)))
        elif roll < 0.55:
            name = rng.choice(_ONE_Q + _ROT)
            params = (rng.uniform(0, 6.28),) if name in _ROT else ()
            c.add(name, [rng.randrange(n)], params)
        else:
            a, b = rng.sample(range(n), 2)
            c.add(rng.choice(("cx", "cz")), [a, b])
    return c
