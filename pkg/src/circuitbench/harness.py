"""Execution framework: workouts, worker processes, timeout, statuses, results.

Each test runs in its own worker subprocess speaking a line-delimited JSON
protocol on stdio; artifacts pass by file path in a per-test scratch
directory.  The harness enforces the timeout by killing the worker's
process group, recomputes all circuit metrics itself from the returned
artifact (worker-reported numbers are informational only), and assigns one
of four statuses: PASSED, SKIPPED, FAILED, XFAIL.
"""
from __future__ import annotations

import configparser
import datetime
import json
import logging
import os
import platform
import queue
import re
import shlex
import signal
import socket
import subprocess
import sys
import tempfile
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .circuit import Circuit, CircuitError, op_counts, two_qubit_depth, two_qubit_gate_count
from .qasm import QasmError, parse_qasm
from .topology import DeviceModel, TopologySpec, load_device, smallest_fit
from .transpiler import DEFAULT_BASIS, DEFAULT_SHOTS, TranspileError, execution_time_estimate, schedule_duration
from .verify import validate_structure

logger = logging.getLogger(__name__)

PROTOCOL_VERSION = 1
CAPABILITIES = ("construct", "manipulate", "transpile_abstract", "transpile_device")

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_DEVICE_FILE = DATA_DIR / "devices" / "hex133.json"
DEFAULT_QASM_DIR = DATA_DIR / "qasm"
DEFAULT_HAM_DIR = DATA_DIR / "hamiltonians"
IMPORT_DIR = DATA_DIR / "qasm_import"


class HarnessError(RuntimeError):
    """Configuration or orchestration failure (not a test failure)."""


class TestStatus:
    PASSED = "PASSED"
    SKIPPED = "SKIPPED"
    FAILED = "FAILED"
    XFAIL = "XFAIL"
    ALL = ("PASSED", "SKIPPED", "FAILED", "XFAIL")


# -- wire protocol ------------------------------------------------------------


@dataclass
class WireMessage:
    """One protocol message: a type plus its payload fields."""

    type: str
    fields: dict = field(default_factory=dict)

    TYPES = ("hello", "run_test", "result", "error")

    def get(self, key, default=None):
        return self.fields.get(key, default)


class WireError(ValueError):
    """Malformed protocol line."""


def wire_encode(msg: WireMessage) -> str:
    doc = {"type": msg.type, "protocol_version": PROTOCOL_VERSION}
    doc.update(msg.fields)
    return json.dumps(doc, sort_keys=True)


def wire_decode(line: str) -> WireMessage:
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise WireError(f"malformed wire line: {exc}") from exc
    if not isinstance(doc, dict) or "type" not in doc:
        raise WireError("wire message must be an object with a 'type'")
    mtype = doc.pop("type")
    if mtype not in WireMessage.TYPES:
        raise WireError(f"unknown message type '{mtype}'")
    version = doc.pop("protocol_version", None)
    if version != PROTOCOL_VERSION:
        raise WireError(f"unsupported protocol version {version!r}")
    if mtype == "result" and "test_id" not in doc:
        raise WireError("result message missing test_id")
    return WireMessage(mtype, doc)


# -- configuration --------------------------------------------------------------


@dataclass
class RunConfig:
    timeout_s: float = 3600.0
    topologies: list[str] = field(default_factory=lambda: list(TopologySpec.FAMILIES))
    basis: list[str] = field(default_factory=lambda: list(DEFAULT_BASIS))
    device_file: str = str(DEFAULT_DEVICE_FILE)
    opt_level: int = 1
    skip_file: str = "skipfile.txt"
    qasm_dir: str = str(DEFAULT_QASM_DIR)
    hamiltonian_dir: str = str(DEFAULT_HAM_DIR)
    workers: dict[str, dict] = field(default_factory=dict)
    single_execution: bool = True  # fixed policy: one run per test
    include_builtin_workouts: bool = True

    def echo(self) -> dict:
        return {
            "timeout_s": self.timeout_s,
            "topologies": list(self.topologies),
            "basis_gates": list(self.basis),
            "device_file": self.device_file,
            "opt_level": self.opt_level,
            "skip_file": self.skip_file,
            "qasm_dir": self.qasm_dir,
            "hamiltonian_dir": self.hamiltonian_dir,
            "single_execution": self.single_execution,
        }


_GENERAL_KEYS = {"timeout", "skip_file", "qasm_dir", "hamiltonian_dir"}
_TRANSPILE_KEYS = {"topologies", "basis_gates", "device_file", "opt_level"}


def load_config(path: str | Path | None) -> RunConfig:
    """Read a sectioned key=value config; every field has a default.

    Unknown keys and sections warn rather than fail so configs stay
    forward compatible.
    """
    cfg = RunConfig()
    if path is None:
        return cfg
    path = Path(path)
    if not path.exists():
        raise HarnessError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise HarnessError(f"cannot parse config {path}: {exc}") from exc

    base = path.parent

    def respath(value: str) -> str:
        p = Path(value)
        return str(p if p.is_absolute() else base / p)

    for section in parser.sections():
        if section == "general":
            for key, value in parser.items(section):
                if key == "timeout":
                    cfg.timeout_s = float(value)
                    if cfg.timeout_s <= 0:
                        raise HarnessError("timeout must be positive")
                elif key == "skip_file":
                    cfg.skip_file = respath(value)
                elif key == "qasm_dir":
                    cfg.qasm_dir = respath(value)
                elif key == "hamiltonian_dir":
                    cfg.hamiltonian_dir = respath(value)
                elif key == "builtin_workouts":
                    cfg.include_builtin_workouts = value.strip().lower() in ("1", "true", "yes", "on")
                else:
                    logger.warning("ignoring unknown key '%s' in [general]", key)
        elif section == "transpile":
            for key, value in parser.items(section):
                if key == "topologies":
                    families = [t.strip() for t in value.split(",") if t.strip()]
                    for fam in families:
                        if fam not in TopologySpec.FAMILIES:
                            raise HarnessError(f"unknown topology family '{fam}' in config")
                    cfg.topologies = families
                elif key == "basis_gates":
                    cfg.basis = [g.strip() for g in value.split(",") if g.strip()]
                    if not cfg.basis:
                        raise HarnessError("basis_gates must be nonempty")
                elif key == "device_file":
                    cfg.device_file = respath(value)
                elif key == "opt_level":
                    cfg.opt_level = int(value)
                else:
                    logger.warning("ignoring unknown key '%s' in [transpile]", key)
        elif section.startswith("worker."):
            name = section.split(".", 1)[1]
            cfg.workers[name] = dict(parser.items(section))
        else:
            logger.warning("ignoring unknown config section [%s]", section)
    return cfg


# -- workouts and discovery -------------------------------------------------------


@dataclass
class WorkoutDef:
    """One abstract test: identity, kind, input, and optional target."""

    test_id: str
    kind: str  # construct | manipulate | transpile_abstract | transpile_device
    input: dict  # {"generator": {...}} | {"qasm_path": ...} | {"hamiltonian_path": ...}
    num_qubits: int
    target_family: str | None = None  # for transpile_abstract
    expected_fail: bool = False


_QREG_RE = re.compile(r"^\s*qreg\s+[A-Za-z_][A-Za-z0-9_]*\s*\[\s*(\d+)\s*\]", re.MULTILINE)
_NUMQ_RE = re.compile(r"^num_qubits:\s*(\d+)", re.MULTILINE)


def _peek_qasm_width(path: Path) -> int:
    sizes = _QREG_RE.findall(path.read_text())
    if not sizes:
        raise HarnessError(f"no qreg declaration found in {path}")
    return sum(int(s) for s in sizes)


def _peek_ham_width(path: Path) -> int:
    m = _NUMQ_RE.search(path.read_text())
    if not m:
        raise HarnessError(f"no num_qubits header in {path}")
    return int(m.group(1))


def _builtin_workouts() -> list[WorkoutDef]:
    gen = lambda name, **args: {"generator": {"name": name, "args": args}}
    defs = [
        WorkoutDef("construct/qv-100-build", "construct", gen("qv", n=100, layers=100, seed=11), 100),
        WorkoutDef("construct/dtc-100-build", "construct", gen("dtc", n=100, steps=100, seed=5), 100),
        WorkoutDef("construct/clifford-50-build", "construct", gen("clifford", n=50, depth=50, seed=7), 50),
        WorkoutDef("construct/su2-100-build", "construct", gen("su2", n=100, reps=3), 100),
        WorkoutDef("construct/su2-100-bind", "construct", gen("su2_bind", n=100, reps=3, seed=3), 100),
        WorkoutDef("construct/ghz-100-build", "construct", gen("ghz", n=100), 100),
        WorkoutDef("construct/bv-100-build", "construct", gen("bv", secret="10" * 50), 101),
        WorkoutDef("construct/mcx-10-build", "construct", gen("mcx", num_controls=10), 19),
        # Mirrors the memory-exhausting case: tagged expected-fail, never run.
        WorkoutDef("construct/mcx-14-build", "construct", gen("mcx", num_controls=14), 27, expected_fail=True),
        WorkoutDef("manipulate/dtc-100-twirl", "manipulate", gen("twirl_dtc", n=100, steps=100, seed=5), 100),
        WorkoutDef("manipulate/mcx-12-decompose", "manipulate", gen("mcx", num_controls=12), 23),
    ]
    qv100 = IMPORT_DIR / "qv100.qasm"
    bigint = IMPORT_DIR / "bigint301.qasm"
    if qv100.exists():
        defs.append(
            WorkoutDef("construct/qasm-import-qv100", "construct", {"qasm_path": str(qv100)}, 100)
        )
        defs.append(
            WorkoutDef(
                "manipulate/qv-100-basis-change",
                "manipulate",
                {"generator": {"name": "basis_change", "args": {"qasm_path": str(qv100)}}},
                100,
            )
        )
    if bigint.exists():
        defs.append(
            WorkoutDef("construct/qasm-import-bigint", "construct", {"qasm_path": str(bigint)}, 1)
        )
    return defs


def discover_tests(config: RunConfig) -> list[WorkoutDef]:
    """Expand the workout registry against the configured corpus.

    Abstract transpile tests are the corpus (QASM plus Hamiltonian files)
    crossed with the configured topology families; device tests bind the
    same corpus to the device file.  Ordering is lexicographic by test_id.
    """
    defs = _builtin_workouts() if config.include_builtin_workouts else []
    qasm_dir = Path(config.qasm_dir)
    ham_dir = Path(config.hamiltonian_dir)
    if not qasm_dir.is_dir():
        raise HarnessError(f"qasm corpus directory not found: {qasm_dir}")
    if not ham_dir.is_dir():
        raise HarnessError(f"hamiltonian corpus directory not found: {ham_dir}")
    device_name = Path(config.device_file).stem

    corpus: list[tuple[str, dict, int]] = []
    for path in sorted(qasm_dir.glob("*.qasm")):
        corpus.append((path.stem, {"qasm_path": str(path)}, _peek_qasm_width(path)))
    for path in sorted(ham_dir.glob("*.ham")):
        corpus.append((path.stem, {"hamiltonian_path": str(path)}, _peek_ham_width(path)))

    for stem, descriptor, width in corpus:
        for family in config.topologies:
            defs.append(
                WorkoutDef(
                    f"transpile_abstract/{stem}@{family}",
                    "transpile_abstract",
                    descriptor,
                    width,
                    target_family=family,
                )
            )
        defs.append(
            WorkoutDef(
                f"transpile_device/{stem}@{device_name}",
                "transpile_device",
                descriptor,
                width,
            )
        )

    defs.sort(key=lambda d: d.test_id)
    seen = set()
    for d in defs:
        if d.test_id in seen:
            raise HarnessError(f"duplicate test_id '{d.test_id}'")
        seen.add(d.test_id)
    return defs


# -- skipfile ----------------------------------------------------------------------


def read_skipfile(path: str | Path) -> set[str]:
    path = Path(path)
    if not path.exists():
        return set()
    entries = set()
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            entries.add(line)
    return entries


def append_skipfile(path: str | Path, test_id: str, timeout_s: float) -> None:
    stamp = datetime.date.today().isoformat()
    line = f"{test_id}  # host={socket.gethostname()} timeout={timeout_s:g}s date={stamp}\n"
    with open(path, "a") as fh:
        fh.write(line)


# -- worker subprocess management ------------------------------------------------------


class WorkerTimeout(Exception):
    pass


class WorkerCrashed(Exception):
    pass


class WorkerClient:
    """One worker subprocess with line-delimited JSON on stdio.

    The process runs in its own session so a timeout can kill the whole
    process tree.
    """

    def __init__(self, argv: list[str]):
        self.argv = argv
        self.proc: subprocess.Popen | None = None
        self._lines: queue.Queue = queue.Queue()
        self._stderr: list[str] = []

    @property
    def pid(self) -> int | None:
        return self.proc.pid if self.proc else None

    def start(self) -> None:
        try:
            self.proc = subprocess.Popen(
                self.argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                bufsize=1,
                start_new_session=True,
            )
        except OSError as exc:
            raise WorkerCrashed(f"cannot spawn worker {self.argv!r}: {exc}") from exc
        threading.Thread(target=self._pump_stdout, daemon=True).start()
        threading.Thread(target=self._pump_stderr, daemon=True).start()

    def _pump_stdout(self) -> None:
        assert self.proc and self.proc.stdout
        for line in self.proc.stdout:
            self._lines.put(line)
        self._lines.put(None)  # EOF marker

    def _pump_stderr(self) -> None:
        assert self.proc and self.proc.stderr
        for line in self.proc.stderr:
            self._stderr.append(line)

    def stderr_tail(self, n: int = 5) -> str:
        return "".join(self._stderr[-n:]).strip()

    def read_message(self, deadline_s: float) -> WireMessage:
        deadline = time.monotonic() + deadline_s
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise WorkerTimeout()
            try:
                line = self._lines.get(timeout=min(remaining, 0.2))
            except queue.Empty:
                continue
            if line is None:
                raise WorkerCrashed(self.stderr_tail() or "worker stream closed")
            line = line.strip()
            if line:
                return wire_decode(line)

    def send(self, msg: WireMessage) -> None:
        assert self.proc and self.proc.stdin
        try:
            self.proc.stdin.write(wire_encode(msg) + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise WorkerCrashed(f"worker pipe closed: {exc}") from exc

    def kill(self) -> None:
        """Terminate the worker's whole process group."""
        if self.proc is None:
            return
        try:
            os.killpg(os.getpgid(self.proc.pid), signal.SIGKILL)
        except (ProcessLookupError, PermissionError):
            pass
        try:
            self.proc.wait(timeout=1.0)
        except subprocess.TimeoutExpired:
            pass

    def close(self) -> None:
        if self.proc is None:
            return
        try:
            if self.proc.stdin:
                self.proc.stdin.close()
            self.proc.wait(timeout=0.5)
        except (OSError, subprocess.TimeoutExpired):
            self.kill()


def worker_argv(name: str, config: RunConfig) -> list[str]:
    if name == "builtin":
        return [sys.executable, "-m", "circuitbench.worker"]
    if name in config.workers and "exec" in config.workers[name]:
        return shlex.split(config.workers[name]["exec"])
    raise HarnessError(f"no exec command configured for worker '{name}'")


def probe_worker(argv: list[str], timeout_s: float = 10.0) -> dict:
    """Spawn a worker just to read its hello; returns the hello fields."""
    client = WorkerClient(argv)
    client.start()
    try:
        hello = client.read_message(timeout_s)
        if hello.type != "hello":
            raise WorkerCrashed(f"expected hello, got {hello.type}")
        return hello.fields
    finally:
        client.close()
        client.kill()


# -- records and environment ---------------------------------------------------------


@dataclass
class TestRecord:
    test_id: str
    status: str
    timeout_s: float
    metrics: dict | None = None
    detail: str | None = None
    environment: dict = field(default_factory=dict)

    def to_doc(self) -> dict:
        return {
            "test_id": self.test_id,
            "status": self.status,
            "timeout_s": self.timeout_s,
            "metrics": self.metrics,
            "detail": self.detail,
            "environment": self.environment,
        }


def _cpu_model() -> str:
    try:
        for line in Path("/proc/cpuinfo").read_text().splitlines():
            if line.lower().startswith("model name"):
                return line.split(":", 1)[1].strip()
    except OSError:
        pass
    return platform.processor() or platform.machine()


def environment_stamp(worker_info: dict | None = None) -> dict:
    from . import __version__

    try:
        memory = os.sysconf("SC_PAGE_SIZE") * os.sysconf("SC_PHYS_PAGES")
    except (ValueError, OSError):
        memory = 0
    env = {
        "hostname": socket.gethostname(),
        "cpu": _cpu_model(),
        "memory_bytes": memory,
        "os": platform.platform(),
        "versions": {"python": platform.python_version(), "circuitbench": __version__},
    }
    if worker_info:
        env["worker"] = {
            "name": worker_info.get("worker", "unknown"),
            "version": worker_info.get("version", "unknown"),
        }
    return env


# -- single test execution --------------------------------------------------------------


def _resolve_target(test: WorkoutDef, config: RunConfig, device: DeviceModel | None):
    """Coupling map and wire target descriptor for a transpile workout."""
    if test.kind == "transpile_abstract":
        coupling = smallest_fit(test.target_family, test.num_qubits)
        family = test.target_family
    elif test.kind == "transpile_device":
        assert device is not None
        coupling = device.coupling
        family = "device"
    else:
        return None, None
    descriptor = {
        "topology": {
            "family": family,
            "num_nodes": coupling.num_nodes,
            "edges": sorted(list(e) for e in coupling.edges),
        },
        "basis": list(config.basis),
        "opt_level": config.opt_level,
    }
    return coupling, descriptor


def _harness_metrics(artifact: Circuit, result_msg: WireMessage) -> dict:
    """Metrics recomputed from the artifact; timings come from the worker."""
    metrics = {
        "two_q_gates": two_qubit_gate_count(artifact),
        "two_q_depth": two_qubit_depth(artifact),
        "wall_time_s": float(result_msg.get("wall_time_s", 0.0)),
        "num_qubits": artifact.num_qubits,
        "op_counts": op_counts(artifact),
    }
    worker_metrics = result_msg.get("worker_metrics") or {}
    if "qasm_load_time_s" in worker_metrics:
        metrics["qasm_load_time_s"] = float(worker_metrics["qasm_load_time_s"])
    return metrics


def run_single(
    test: WorkoutDef,
    worker: str | list[str],
    config: RunConfig,
    capabilities: list[str] | None = None,
    device: DeviceModel | None = None,
    scratch_root: str | None = None,
    worker_info: dict | None = None,
    client_hook=None,
) -> TestRecord:
    """Run one workout through a fresh worker process and assign a status.

    Status precedence: XFAIL (never executed), SKIPPED (skipfile entry,
    missing capability, or circuit wider than the device), FAILED (timeout,
    worker error or crash, invalid artifact), otherwise PASSED.  Timed-out
    tests are appended to the skipfile.
    """
    env = environment_stamp(worker_info)
    record = TestRecord(test.test_id, TestStatus.FAILED, config.timeout_s, environment=env)

    if test.expected_fail:
        record.status = TestStatus.XFAIL
        record.detail = "declared expected-fail; not executed"
        return record

    if test.test_id in read_skipfile(config.skip_file):
        record.status = TestStatus.SKIPPED
        record.detail = "listed in skipfile"
        return record

    if test.kind == "transpile_device":
        if device is None:
            device = load_device(config.device_file)
        if test.num_qubits > device.coupling.num_nodes:
            record.status = TestStatus.SKIPPED
            record.detail = (
                f"insufficient qubit count: circuit has {test.num_qubits}, "
                f"device has {device.coupling.num_nodes}"
            )
            return record

    argv = worker if isinstance(worker, list) else worker_argv(worker, config)
    if capabilities is None:
        try:
            hello = probe_worker(argv)
        except (WorkerTimeout, WorkerCrashed, WireError) as exc:
            record.detail = f"worker hello failed: {exc}"
            return record
        capabilities = hello.get("capabilities", [])
        worker_info = hello
        record.environment = environment_stamp(worker_info)

    if test.kind not in capabilities:
        record.status = TestStatus.SKIPPED
        record.detail = f"worker lacks capability '{test.kind}'"
        return record

    try:
        coupling, target = _resolve_target(test, config, device)
    except Exception as exc:
        record.detail = f"cannot resolve target: {exc}"
        return record

    scratch = tempfile.mkdtemp(prefix="cbench-", dir=scratch_root)
    request = WireMessage(
        "run_test",
        {
            "test_id": test.test_id,
            "kind": test.kind,
            "input": test.input,
            "target": target,
            "scratch_dir": scratch,
            "timeout_s": config.timeout_s,
        },
    )

    client = WorkerClient(argv)
    try:
        client.start()
    except WorkerCrashed as exc:
        record.detail = str(exc)
        return record
    if client_hook is not None:
        client_hook(client)
    try:
        hello = client.read_message(min(config.timeout_s, 10.0))
        if hello.type != "hello":
            record.detail = f"expected hello, got '{hello.type}'"
            return record
        client.send(request)
        reply = client.read_message(config.timeout_s)
    except WorkerTimeout:
        client.kill()
        append_skipfile(config.skip_file, test.test_id, config.timeout_s)
        record.detail = f"timed out after {config.timeout_s:g}s; worker killed, test added to skipfile"
        return record
    except (WorkerCrashed, WireError) as exc:
        client.kill()
        record.detail = f"worker failed: {exc}"
        return record
    finally:
        client.close()

    if reply.type == "error":
        record.detail = f"worker error: {reply.get('message', 'unspecified')}"
        return record
    if reply.type != "result":
        record.detail = f"unexpected reply type '{reply.type}'"
        return record
    if reply.get("test_id") != test.test_id:
        record.detail = f"result test_id mismatch: {reply.get('test_id')!r}"
        return record
    if not reply.get("ok", False):
        record.detail = f"worker reported failure: {reply.get('message', 'unspecified')}"
        return record

    artifact_path = reply.get("artifact_path")
    if not artifact_path or not Path(artifact_path).exists():
        record.detail = "result missing artifact"
        return record
    try:
        artifact = parse_qasm(Path(artifact_path).read_text())
    except QasmError as exc:
        record.detail = f"artifact does not parse: {exc}"
        return record

    try:
        metrics = _harness_metrics(artifact, reply)
    except CircuitError as exc:
        record.detail = f"artifact metrics undefined: {exc}"
        return record

    if coupling is not None:
        report = validate_structure(artifact, coupling, config.basis)
        if not report.ok:
            record.detail = f"artifact failed validation: {report}"
            return record

    if test.kind == "transpile_device" and device is not None:
        try:
            duration = schedule_duration(artifact, device.gate_durations)
            metrics["estimated_execution_s"] = execution_time_estimate(
                duration, DEFAULT_SHOTS, device.rep_delay
            )
        except TranspileError:
            pass  # estimate is optional when durations do not cover the artifact

    record.status = TestStatus.PASSED
    record.metrics = metrics
    record.detail = None
    return record


# -- suite execution -----------------------------------------------------------------------


def status_counts(records: list[TestRecord]) -> dict[str, int]:
    counts = {status: 0 for status in TestStatus.ALL}
    for record in records:
        counts[record.status] += 1
    return counts


def run_suite(
    config: RunConfig,
    worker: str = "builtin",
    output_path: str | Path | None = None,
    tests: list[WorkoutDef] | None = None,
) -> tuple[list[TestRecord], dict]:
    """Run every discovered workout sequentially and emit one result document.

    Per-test failures never abort the suite.  Tests masked by the skipfile
    are reported with a warning since stale entries can hide improvements.
    """
    argv = worker_argv(worker, config)
    try:
        worker_info = probe_worker(argv)
    except (WorkerTimeout, WorkerCrashed, WireError) as exc:
        raise HarnessError(f"worker '{worker}' failed its hello probe: {exc}") from exc
    capabilities = worker_info.get("capabilities", [])

    device = load_device(config.device_file)
    if tests is None:
        tests = discover_tests(config)

    masked = sorted(t.test_id for t in tests if t.test_id in read_skipfile(config.skip_file))
    if masked:
        logger.warning(
            "skipfile %s masks %d test(s): %s", config.skip_file, len(masked), ", ".join(masked)
        )

    records = []
    for test in tests:
        records.append(
            run_single(
                test,
                argv,
                config,
                capabilities=capabilities,
                device=device,
                worker_info=worker_info,
            )
        )

    document = {
        "run_id": f"{socket.gethostname()}-{uuid.uuid4().hex[:12]}",
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "environment": environment_stamp(worker_info),
        "config": config.echo(),
        "summary": status_counts(records),
        "records": [r.to_doc() for r in records],
    }
    if output_path is not None:
        Path(output_path).write_text(json.dumps(document, indent=2, sort_keys=True) + "\n")
    return records, document


def load_result_file(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise HarnessError(f"cannot read result file {path}: {exc}") from exc
    if "records" not in doc:
        raise HarnessError(f"result file {path} has no records")
    return doc
