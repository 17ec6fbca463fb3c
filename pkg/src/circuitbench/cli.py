"""Command-line entry point.

Verbs: run, list, generate, validate, report, estimate.  Exit codes:
0 success, 1 validation violations, 2 usage/config error, 3 internal
error.  Suite failures do not fail the process unless --strict is given.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .circuit import CircuitError
from .generators import (
    GeneratorError,
    decompose_mcx,
    gen_bv,
    gen_clifford_layers,
    gen_dtc,
    gen_efficient_su2,
    gen_ghz,
    gen_qv,
)
from .harness import HarnessError, discover_tests, load_config, load_result_file, run_suite
from .qasm import QasmError, emit_qasm, parse_qasm
from .report import METRICS, ReportError, aggregate_table, normalize, render, render_status_summary, status_summary
from .topology import TopologyError, load_device, smallest_fit, build, TopologySpec
from .transpiler import DEFAULT_SHOTS, TranspileError, execution_time_estimate, schedule_duration
from .verify import validate_structure

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _parse_topology(text: str, width: int):
    """Parse 'family' or 'family:size' (square uses RxC, heavy_hex odd d)."""
    family, _, size = text.partition(":")
    if family not in TopologySpec.FAMILIES:
        raise TopologyError(f"unknown topology family '{family}'")
    if not size:
        return smallest_fit(family, width)
    if family == "square":
        rows, _, cols = size.partition("x")
        return build(TopologySpec("square", rows=int(rows), cols=int(cols)))
    if family == "heavy_hex":
        return build(TopologySpec("heavy_hex", distance=int(size)))
    return build(TopologySpec(family, n=int(size)))


def cmd_run(args) -> int:
    config = load_config(args.config)
    if args.timeout is not None:
        config.timeout_s = args.timeout
    if args.skip_file is not None:
        config.skip_file = args.skip_file
    records, document = run_suite(config, worker=args.worker, output_path=args.output)
    summary = document["summary"]
    sys.stdout.write(render_status_summary(summary))
    if args.output:
        sys.stdout.write(f"result file: {args.output}\n")
    if args.strict and summary["FAILED"] > 0:
        return EXIT_VIOLATIONS
    return EXIT_OK


def cmd_list(args) -> int:
    config = load_config(args.config)
    for test in discover_tests(config):
        flags = " [xfail]" if test.expected_fail else ""
        sys.stdout.write(f"{test.test_id}  ({test.kind}, {test.num_qubits}q){flags}\n")
    return EXIT_OK


_FAMILIES = {
    "ghz": lambda a: gen_ghz(a.qubits),
    "bv": lambda a: gen_bv(a.secret if a.secret else "10" * (a.qubits // 2)),
    "qv": lambda a: gen_qv(a.qubits, a.layers or a.qubits, a.seed),
    "clifford": lambda a: gen_clifford_layers(a.qubits, a.layers or a.qubits, a.seed),
    "su2": lambda a: gen_efficient_su2(a.qubits, a.reps),
    "dtc": lambda a: gen_dtc(a.qubits, a.steps, a.seed),
    "mcx": lambda a: decompose_mcx(a.qubits),
}


def cmd_generate(args) -> int:
    circuit = _FAMILIES[args.family](args)
    text = emit_qasm(circuit)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    circuit = parse_qasm(Path(args.qasm).read_text())
    coupling = _parse_topology(args.topology, circuit.num_qubits)
    basis = [g.strip() for g in args.basis.split(",") if g.strip()]
    report = validate_structure(circuit, coupling, basis)
    if report.ok:
        sys.stdout.write("ok\n")
        return EXIT_OK
    sys.stdout.write(str(report) + "\n")
    return EXIT_VIOLATIONS


def cmd_report(args) -> int:
    baseline = load_result_file(args.baseline)["records"]
    candidate_records = []
    for path in args.inputs:
        candidate_records.extend(load_result_file(path)["records"])
    series = [normalize(candidate_records, baseline, metric) for metric in METRICS]
    rows = aggregate_table(series, by=args.group_by)
    fmt = {"md": "markdown", "csv": "csv"}[args.format]
    sys.stdout.write(render(rows, fmt))
    excluded = sum(s.excluded for s in series)
    if excluded:
        sys.stderr.write(f"note: {excluded} (test, metric) pairs excluded from ratios\n")
    sys.stdout.write("\nstatus summary (candidate):\n")
    sys.stdout.write(render_status_summary(status_summary(candidate_records)))
    return EXIT_OK


def cmd_estimate(args) -> int:
    circuit = parse_qasm(Path(args.qasm).read_text())
    device = load_device(args.device)
    duration = schedule_duration(circuit, device.gate_durations)
    total = execution_time_estimate(duration, args.shots, device.rep_delay)
    sys.stdout.write(
        json.dumps(
            {
                "circuit_duration_s": duration,
                "shots": args.shots,
                "rep_delay_s": device.rep_delay,
                "total_execution_s": total,
            },
            indent=2,
        )
        + "\n"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="circuitbench", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log warnings and info to stderr")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("run", help="run the suite against a worker")
    p.add_argument("--worker", default="builtin")
    p.add_argument("--config", default=None)
    p.add_argument("--output", default=None)
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--skip-file", dest="skip_file", default=None)
    p.add_argument("--strict", action="store_true", help="exit nonzero when any test FAILED")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("list", help="list discovered workouts")
    p.add_argument("--config", default=None)
    p.add_argument("--workouts", action="store_true", help="accepted for symmetry; listing is the default")
    p.set_defaults(fn=cmd_list)

    p = sub.add_parser("generate", help="write a corpus circuit as OpenQASM")
    p.add_argument("--family", choices=sorted(_FAMILIES), required=True)
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--layers", type=int, default=None)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--secret", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("validate", help="structurally validate a QASM file against a target")
    p.add_argument("--qasm", required=True)
    p.add_argument("--topology", required=True, help="family or family:size (square RxC)")
    p.add_argument("--basis", default="sx,x,rz,cz")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("report", help="baseline-normalized aggregate table")
    p.add_argument("--baseline", required=True)
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--group-by", dest="group_by", choices=("topology", "suite"), default="topology")
    p.add_argument("--format", choices=("md", "csv"), default="md")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("estimate", help="hardware execution-time estimate for a circuit")
    p.add_argument("--qasm", required=True)
    p.add_argument("--device", required=True)
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    p.set_defaults(fn=cmd_estimate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.fn(args)
    except (HarnessError, QasmError, TopologyError, GeneratorError, ReportError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (TranspileError, CircuitError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - internal faults
        sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
