"""Built-in worker: the reference gym run as a child process.

Speaks the line-delimited JSON protocol on stdio and exercises the
baseline pipeline for every request kind.  Run with
``python -m circuitbench.worker``.
"""
from __future__ import annotations

import random
import sys
import time
from pathlib import Path

from . import __version__
from .circuit import bind_parameters
from .generators import (
    decompose_mcx,
    gen_bv,
    gen_clifford_layers,
    gen_dtc,
    gen_efficient_su2,
    gen_ghz,
    gen_qv,
    gen_trotter,
    load_pauli_hamiltonian,
    pauli_twirl,
)
from .harness import CAPABILITIES, WireError, WireMessage, wire_decode, wire_encode
from .qasm import emit_qasm, parse_qasm
from .topology import CouplingMap
from .transpiler import DEFAULT_BASIS, translate_basis, transpile


def _build_su2_bound(n: int, reps: int, seed: int | None = 0):
    circuit = gen_efficient_su2(n, reps)
    if seed is None:
        values = {sym: 0.0 for sym in circuit.free_symbols}
    else:
        rng = random.Random(seed)
        values = {sym: rng.uniform(0, 6.283185307179586) for sym in circuit.free_symbols}
    return bind_parameters(circuit, values)


def _build_basis_change(qasm_path: str, basis=None):
    circuit = parse_qasm(Path(qasm_path).read_text())
    return circuit, translate_basis(circuit, list(basis) if basis else list(DEFAULT_BASIS))


GENERATORS = {
    "qv": lambda args: gen_qv(args["n"], args["layers"], args.get("seed", 0)),
    "ghz": lambda args: gen_ghz(args["n"]),
    "bv": lambda args: gen_bv(args["secret"]),
    "clifford": lambda args: gen_clifford_layers(args["n"], args["depth"], args.get("seed", 0)),
    # the artifact format carries no symbols, so the build is zero-bound for export
    "su2": lambda args: _build_su2_bound(args["n"], args["reps"], seed=None),
    "su2_bind": lambda args: _build_su2_bound(args["n"], args["reps"], args.get("seed", 0)),
    "dtc": lambda args: gen_dtc(args["n"], args["steps"], args.get("seed", 0)),
    "mcx": lambda args: decompose_mcx(args["num_controls"]),
    "twirl_dtc": lambda args: pauli_twirl(
        gen_dtc(args["n"], args["steps"], args.get("seed", 0)), args.get("seed", 0)
    ),
}


def _build_input(descriptor: dict) -> tuple:
    """Materialize a request input; returns (circuit, qasm_load_time or None)."""
    if "qasm_path" in descriptor:
        start = time.perf_counter()
        circuit = parse_qasm(Path(descriptor["qasm_path"]).read_text())
        return circuit, time.perf_counter() - start
    if "hamiltonian_path" in descriptor:
        h = load_pauli_hamiltonian(descriptor["hamiltonian_path"])
        return gen_trotter(h), None
    if "generator" in descriptor:
        spec = descriptor["generator"]
        name, args = spec["name"], spec.get("args", {})
        if name == "basis_change":
            _, changed = _build_basis_change(args["qasm_path"], args.get("basis"))
            return changed, None
        if name not in GENERATORS:
            raise ValueError(f"unknown generator '{name}'")
        return GENERATORS[name](args), None
    raise ValueError(f"unrecognized input descriptor: {sorted(descriptor)}")


def handle_request(msg: WireMessage) -> WireMessage:
    test_id = msg.get("test_id", "?")
    kind = msg.get("kind")
    if kind not in CAPABILITIES:
        return WireMessage("error", {"test_id": test_id, "message": f"unknown kind '{kind}'"})
    scratch = msg.get("scratch_dir") or "."
    try:
        start = time.perf_counter()
        circuit, load_time = _build_input(msg.get("input", {}))
        if kind in ("transpile_abstract", "transpile_device"):
            target = msg.get("target") or {}
            topo = target.get("topology") or {}
            coupling = CouplingMap.from_pairs(topo["num_nodes"], topo["edges"])
            result = transpile(
                circuit,
                coupling,
                basis=target.get("basis"),
                opt_level=int(target.get("opt_level", 1)),
            )
            artifact = result.circuit
        else:
            artifact = circuit
        text = emit_qasm(artifact)
        wall = time.perf_counter() - start
        path = Path(scratch) / "artifact.qasm"
        path.write_text(text)
        worker_metrics = {
            "num_instructions": len(artifact.instructions),
        }
        if load_time is not None:
            worker_metrics["qasm_load_time_s"] = load_time
        return WireMessage(
            "result",
            {
                "test_id": test_id,
                "ok": True,
                "wall_time_s": wall,
                "artifact_path": str(path),
                "worker_metrics": worker_metrics,
            },
        )
    except Exception as exc:  # any failure maps to a protocol error message
        return WireMessage("error", {"test_id": test_id, "message": f"{type(exc).__name__}: {exc}"})


def serve(stdin=None, stdout=None) -> None:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout

    def emit(msg: WireMessage) -> None:
        stdout.write(wire_encode(msg) + "\n")
        stdout.flush()

    emit(
        WireMessage(
            "hello",
            {
                "worker": "builtin",
                "version": __version__,
                "capabilities": list(CAPABILITIES),
            },
        )
    )
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            msg = wire_decode(line)
        except WireError as exc:
            emit(WireMessage("error", {"test_id": "?", "message": str(exc)}))
            continue
        if msg.type != "run_test":
            emit(WireMessage("error", {"test_id": msg.get("test_id", "?"), "message": f"unexpected message type '{msg.type}'"}))
            continue
        emit(handle_request(msg))


if __name__ == "__main__":
    serve()
