#!/usr/bin/env python3
"""Reference external worker speaking the benchmark wire protocol v1.

A template for wrapping real compiler toolchains: it reads line-delimited
JSON requests on stdin, writes one hello on startup plus one result or
error per request on stdout, and drops artifacts into the request's
scratch directory.

Deliberately self-contained (standard library only) and independent of the
harness package: circuits, QASM reading/writing, routing, and basis
translation are all reimplemented here, so cross-worker comparisons
exercise genuinely different pipelines.

Capabilities: construct (GHZ, BV) and transpile_abstract (identity layout
plus nearest-neighbor swap routing onto the edge list supplied in the
request, then translation to an sx/x/rz/cz-style basis).
"""
from __future__ import annotations

import json
import math
import sys
import time
from collections import deque
from pathlib import Path

PROTOCOL_VERSION = 1
CAPABILITIES = ["construct", "transpile_abstract"]

PI = math.pi

# Gate arities this worker understands when reading QASM.
KNOWN_GATES = {
    "h": (1, 0), "x": (1, 0), "y": (1, 0), "z": (1, 0), "s": (1, 0), "sdg": (1, 0),
    "t": (1, 0), "tdg": (1, 0), "sx": (1, 0), "id": (1, 0),
    "rz": (1, 1), "rx": (1, 1), "ry": (1, 1),
    "cx": (2, 0), "cz": (2, 0), "swap": (2, 0),
}

# 1Q translations onto {rz, sx, x}; angles in radians.
ONE_Q_RULES = {
    "h": [("rz", PI / 2), ("sx", None), ("rz", PI / 2)],
    "x": [("x", None)],
    "z": [("rz", PI)],
    "s": [("rz", PI / 2)],
    "sdg": [("rz", -PI / 2)],
    "t": [("rz", PI / 4)],
    "tdg": [("rz", -PI / 4)],
    "sx": [("sx", None)],
    "id": [],
    "y": [("rz", PI), ("x", None)],  # y = x.z up to phase
}


class Circuit:
    """Minimal gate list: (name, qubits tuple, params tuple)."""

    def __init__(self, num_qubits: int):
        self.num_qubits = num_qubits
        self.ops: list[tuple[str, tuple[int, ...], tuple[float, ...]]] = []
        self.cregs: list[tuple[str, int]] = []
        self.measures: list[tuple[int, str, int]] = []

    def add(self, name: str, qubits, params=()) -> "Circuit":
        self.ops.append((name, tuple(qubits), tuple(params)))
        return self


def build_ghz(n: int) -> Circuit:
    c = Circuit(n)
    c.add("h", [0])
    for q in range(n - 1):
        c.add("cx", [q, q + 1])
    return c


def build_bv(secret: str) -> Circuit:
    if not secret or set(secret) - {"0", "1"}:
        raise ValueError("bv secret must be a nonempty bitstring")
    n = len(secret)
    c = Circuit(n + 1)
    c.add("x", [n])
    c.add("h", [n])
    for q in range(n):
        c.add("h", [q])
    for q, bit in enumerate(secret):
        if bit == "1":
            c.add("cx", [q, n])
    for q in range(n):
        c.add("h", [q])
    return c


# -- QASM subset I/O ------------------------------------------------------------


def read_qasm(text: str) -> Circuit:
    """Parse machine-generated OpenQASM 2: declarations plus plain gate lines."""
    qregs: list[tuple[str, int]] = []
    cregs: list[tuple[str, int]] = []
    body: list[str] = []
    for raw in text.splitlines():
        line = raw.split("//", 1)[0].strip()
        if not line or line.startswith(("OPENQASM", "include")):
            continue
        for stmt in line.split(";"):
            stmt = stmt.strip()
            if stmt:
                body.append(stmt)

    def reg_parts(token: str) -> tuple[str, int]:
        name, _, rest = token.partition("[")
        return name.strip(), int(rest.rstrip("]"))

    ops: list[str] = []
    for stmt in body:
        if stmt.startswith("qreg"):
            qregs.append(reg_parts(stmt[len("qreg"):].strip()))
        elif stmt.startswith("creg"):
            cregs.append(reg_parts(stmt[len("creg"):].strip()))
        else:
            ops.append(stmt)

    offsets = {}
    total = 0
    for name, size in qregs:
        offsets[name] = total
        total += size
    circuit = Circuit(total)
    circuit.cregs = cregs

    def qubit_of(token: str) -> int:
        name, idx = reg_parts(token.strip())
        return offsets[name] + idx

    for stmt in ops:
        if stmt.startswith("barrier"):
            args = stmt[len("barrier"):].strip()
            qubits = [qubit_of(a) for a in args.split(",")] if "[" in args else []
            circuit.add("barrier", qubits)
            continue
        if stmt.startswith("measure"):
            rest = stmt[len("measure"):].strip()
            src, _, dst = rest.partition("->")
            cname, cidx = reg_parts(dst.strip())
            circuit.measures.append((qubit_of(src.strip()), cname, cidx))
            circuit.add("measure", [qubit_of(src.strip())])
            continue
        head, _, args = stmt.partition(" ")
        params: tuple[float, ...] = ()
        name = head
        if "(" in head:
            name, _, ptext = head.partition("(")
            params = tuple(float(p) for p in ptext.rstrip(")").split(","))
        name = name.strip()
        if name not in KNOWN_GATES:
            raise ValueError(f"gate '{name}' outside this worker's subset")
        arity, nparams = KNOWN_GATES[name]
        if len(params) != nparams:
            raise ValueError(f"gate '{name}' takes {nparams} params")
        qubits = [qubit_of(a) for a in args.split(",")]
        if len(qubits) != arity:
            raise ValueError(f"gate '{name}' takes {arity} qubits")
        circuit.add(name, qubits, params)
    return circuit


def write_qasm(circuit: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{max(1, circuit.num_qubits)}];"]
    for name, size in circuit.cregs:
        lines.append(f"creg {name}[{size}];")
    measure_iter = iter(circuit.measures)
    for name, qubits, params in circuit.ops:
        if name == "measure":
            q, cname, cidx = next(measure_iter)
            lines.append(f"measure q[{q}] -> {cname}[{cidx}];")
            continue
        if name == "barrier":
            target = ", ".join(f"q[{q}]" for q in qubits) if qubits else "q"
            lines.append(f"barrier {target};")
            continue
        head = name
        if params:
            head += "(" + ", ".join(f"{p:.17g}" for p in params) + ")"
        lines.append(f"{head} " + ", ".join(f"q[{q}]" for q in qubits) + ";")
    return "\n".join(lines) + "\n"


# -- routing and translation -------------------------------------------------------


def route_nearest_neighbor(circuit: Circuit, num_nodes: int, edges: list[list[int]]) -> Circuit:
    """Identity layout plus swap chains along BFS shortest paths."""
    if circuit.num_qubits > num_nodes:
        raise ValueError("circuit wider than target")
    edge_set = {tuple(sorted(e)) for e in edges}
    adjacency: dict[int, list[int]] = {i: [] for i in range(num_nodes)}
    for a, b in edge_set:
        adjacency[a].append(b)
        adjacency[b].append(a)

    def path_between(src: int, dst: int) -> list[int]:
        prev = {src: src}
        queue = deque([src])
        while queue:
            node = queue.popleft()
            for nxt in adjacency[node]:
                if nxt not in prev:
                    prev[nxt] = node
                    if nxt == dst:
                        out = [dst]
                        while out[-1] != src:
                            out.append(prev[out[-1]])
                        return out[::-1]
                    queue.append(nxt)
        raise ValueError("disconnected target")

    logical_at = list(range(num_nodes))  # physical -> logical content
    position = list(range(num_nodes))  # logical -> physical
    routed = Circuit(num_nodes)
    routed.cregs = circuit.cregs
    measures = iter(circuit.measures)

    def emit_swap(u: int, v: int) -> None:
        routed.add("swap", [u, v])
        lu, lv = logical_at[u], logical_at[v]
        logical_at[u], logical_at[v] = lv, lu
        position[lu], position[lv] = v, u

    for name, qubits, params in circuit.ops:
        if name == "measure":
            q, cname, cidx = next(measures)
            routed.measures.append((position[q], cname, cidx))
            routed.add("measure", [position[q]])
            continue
        if name == "barrier":
            routed.add("barrier", [position[q] for q in qubits])
            continue
        if len(qubits) == 2:
            pa, pb = position[qubits[0]], position[qubits[1]]
            if tuple(sorted((pa, pb))) not in edge_set:
                walk = path_between(pa, pb)
                for u, v in zip(walk, walk[1:-1]):
                    emit_swap(u, v)
                pa = position[qubits[0]]
        routed.add(name, [position[q] for q in qubits], params)
    return routed


def translate(circuit: Circuit, basis: list[str]) -> Circuit:
    """Rewrite onto the requested basis using fixed identities."""
    basis_set = set(basis)
    if "cz" not in basis_set and "cx" not in basis_set:
        raise ValueError("basis has no entangler this worker can produce")
    out = Circuit(circuit.num_qubits)
    out.cregs = circuit.cregs
    out.measures = circuit.measures

    def emit_1q(name: str, qubit: int, param: float | None = None) -> None:
        if name in basis_set:
            out.add(name, [qubit], () if param is None else (param,))
            return
        if name == "rz":
            raise ValueError("basis lacks rz; cannot express rotations")
        for sub, angle in ONE_Q_RULES[name]:
            emit_1q(sub, qubit, angle)

    def emit_cx(control: int, target: int) -> None:
        if "cx" in basis_set:
            out.add("cx", [control, target])
            return
        emit_1q("h", target)
        out.add("cz", [control, target])
        emit_1q("h", target)

    for name, qubits, params in circuit.ops:
        if name in ("measure", "barrier"):
            out.add(name, qubits, params)
        elif name == "swap":
            a, b = qubits
            emit_cx(a, b)
            emit_cx(b, a)
            emit_cx(a, b)
        elif name == "cx":
            emit_cx(*qubits)
        elif name == "cz":
            if "cz" in basis_set:
                out.add("cz", qubits)
            else:
                emit_1q("h", qubits[1])
                emit_cx(*qubits)
                emit_1q("h", qubits[1])
        elif name == "rz":
            emit_1q("rz", qubits[0], params[0])
        elif name == "rx":
            # rx(t) ~ rz(pi/2).sx.rz(t+pi).sx.rz(pi/2) up to global phase
            for sub, angle in (("rz", PI / 2), ("sx", None), ("rz", params[0] + PI),
                               ("sx", None), ("rz", PI / 2)):
                emit_1q(sub, qubits[0], angle)
        elif name == "ry":
            # ry(t) ~ sx.rz(t+pi).sx.rz(pi) up to global phase
            for sub, angle in (("sx", None), ("rz", params[0] + PI), ("sx", None), ("rz", PI)):
                emit_1q(sub, qubits[0], angle)
        else:
            emit_1q(name, qubits[0])
    return out


# -- protocol plumbing ----------------------------------------------------------------


def emit_message(doc: dict) -> None:
    doc["protocol_version"] = PROTOCOL_VERSION
    sys.stdout.write(json.dumps(doc) + "\n")
    sys.stdout.flush()


def build_from_input(descriptor: dict) -> Circuit:
    if "qasm_path" in descriptor:
        return read_qasm(Path(descriptor["qasm_path"]).read_text())
    if "generator" in descriptor:
        spec = descriptor["generator"]
        name, args = spec.get("name"), spec.get("args", {})
        if name == "ghz":
            return build_ghz(int(args["n"]))
        if name == "bv":
            return build_bv(args["secret"])
        raise ValueError(f"generator '{name}' not supported by this worker")
    raise ValueError("unsupported input descriptor")


def handle(msg: dict) -> dict:
    test_id = msg.get("test_id", "?")
    kind = msg.get("kind")
    scratch = Path(msg.get("scratch_dir") or ".")
    try:
        start = time.perf_counter()
        circuit = build_from_input(msg.get("input", {}))
        if kind == "construct":
            artifact = circuit
        elif kind == "transpile_abstract":
            target = msg.get("target") or {}
            topo = target.get("topology") or {}
            routed = route_nearest_neighbor(circuit, int(topo["num_nodes"]), topo["edges"])
            artifact = translate(routed, target.get("basis") or ["sx", "x", "rz", "cz"])
        else:
            return {"type": "error", "test_id": test_id, "message": f"unsupported kind '{kind}'"}
        text = write_qasm(artifact)
        wall = time.perf_counter() - start
        path = scratch / "artifact.qasm"
        path.write_text(text)
        return {
            "type": "result",
            "test_id": test_id,
            "ok": True,
            "wall_time_s": wall,
            "artifact_path": str(path),
            "worker_metrics": {"num_ops": len(artifact.ops)},
        }
    except Exception as exc:
        return {"type": "error", "test_id": test_id, "message": f"{type(exc).__name__}: {exc}"}


def main() -> None:
    emit_message(
        {"type": "hello", "worker": "refadapter", "version": "0.1.0", "capabilities": CAPABILITIES}
    )
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            emit_message({"type": "error", "test_id": "?", "message": f"bad request line: {exc}"})
            continue
        if msg.get("type") != "run_test":
            emit_message(
                {
                    "type": "error",
                    "test_id": msg.get("test_id", "?"),
                    "message": f"unexpected message type {msg.get('type')!r}",
                }
            )
            continue
        emit_message(handle(msg))


if __name__ == "__main__":
    main()
