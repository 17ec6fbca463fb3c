"""Command-line interface tests (driving main() directly)."""
import json
import sys
from pathlib import Path

import pytest

from circuitbench.cli import main
from circuitbench.circuit import op_counts
from circuitbench.qasm import parse_qasm

STUB = str(Path(__file__).parent / "stub_worker.py")


def write_suite_config(tmp_path, extra="") -> Path:
    from circuitbench.generators import gen_ghz
    from circuitbench.qasm import emit_qasm

    qasm_dir = tmp_path / "qasm"
    qasm_dir.mkdir(exist_ok=True)
    for n in (2, 3):
        (qasm_dir / f"ghz-{n}.qasm").write_text(emit_qasm(gen_ghz(n)))
    ham_dir = tmp_path / "ham"
    ham_dir.mkdir(exist_ok=True)
    path = tmp_path / "run.conf"
    path.write_text(
        "[general]\n"
        "builtin_workouts = false\n"
        f"qasm_dir = {qasm_dir}\n"
        f"hamiltonian_dir = {ham_dir}\n"
        f"skip_file = {tmp_path / 'skipfile.txt'}\n"
        "[transpile]\n"
        "topologies = linear, all_to_all\n"
        + extra
    )
    return path


class TestGenerate:
    def test_ghz_three(self, tmp_path, capsys):
        out = tmp_path / "ghz3.qasm"
        assert main(["generate", "--family", "ghz", "--qubits", "3", "-o", str(out)]) == 0
        circuit = parse_qasm(out.read_text())
        assert op_counts(circuit) == {"h": 1, "cx": 2}

    def test_seed_determinism(self, tmp_path):
        a, b = tmp_path / "a.qasm", tmp_path / "b.qasm"
        main(["generate", "--family", "qv", "--qubits", "4", "--seed", "9", "-o", str(a)])
        main(["generate", "--family", "qv", "--qubits", "4", "--seed", "9", "-o", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_stdout_default(self, capsys):
        assert main(["generate", "--family", "ghz", "--qubits", "2"]) == 0
        assert "OPENQASM 2.0;" in capsys.readouterr().out

    def test_unknown_family_usage_error(self):
        with pytest.raises(SystemExit) as err:
            main(["generate", "--family", "nope", "--qubits", "3"])
        assert err.value.code == 2


class TestValidate:
    def test_ok(self, tmp_path, capsys):
        qasm = tmp_path / "ghz3.qasm"
        main(["generate", "--family", "ghz", "--qubits", "3", "-o", str(qasm)])
        code = main(
            ["validate", "--qasm", str(qasm), "--topology", "all_to_all:3", "--basis", "h,cx"]
        )
        assert code == 0
        assert capsys.readouterr().out.strip() == "ok"

    def test_violations_exit_one(self, tmp_path, capsys):
        qasm = tmp_path / "ghz3.qasm"
        main(["generate", "--family", "ghz", "--qubits", "3", "-o", str(qasm)])
        code = main(["validate", "--qasm", str(qasm), "--topology", "linear:3", "--basis", "cx"])
        assert code == 1
        out = capsys.readouterr().out
        assert "non_basis_gate" in out

    def test_missing_file_exit_two(self):
        assert main(["validate", "--qasm", "/no/such.qasm", "--topology", "linear"]) == 2


class TestRun:
    def test_missing_config_exit_two(self):
        assert main(["run", "--config", "/no/such.conf"]) == 2

    def test_small_suite_zero_failed(self, tmp_path, capsys):
        conf = write_suite_config(tmp_path)
        out = tmp_path / "result.json"
        code = main(["run", "--worker", "builtin", "--config", str(conf), "--output", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["summary"]["FAILED"] == 0
        assert doc["summary"]["PASSED"] > 0

    def test_timeout_override_fails_sleeper(self, tmp_path, capsys):
        conf = write_suite_config(
            tmp_path, extra=f"[worker.sleepy]\nexec = {sys.executable} {STUB} sleep\n"
        )
        out = tmp_path / "r.json"
        code = main(
            [
                "run", "--worker", "sleepy", "--config", str(conf),
                "--timeout", "1", "--output", str(out),
            ]
        )
        assert code == 0  # failures are reported, not process errors
        doc = json.loads(out.read_text())
        assert doc["summary"]["FAILED"] > 0

    def test_strict_flips_exit(self, tmp_path):
        conf = write_suite_config(
            tmp_path, extra=f"[worker.dying]\nexec = {sys.executable} {STUB} die\n"
        )
        code = main(["run", "--worker", "dying", "--config", str(conf), "--strict"])
        assert code == 1


class TestReport:
    def test_self_normalization_table(self, tmp_path, capsys):
        conf = write_suite_config(tmp_path)
        out = tmp_path / "result.json"
        main(["run", "--worker", "builtin", "--config", str(conf), "--output", str(out)])
        code = main(["report", "--baseline", str(out), "--inputs", str(out), "--format", "md"])
        assert code == 0
        text = capsys.readouterr().out
        assert "1.00/1.00" in text
        assert "All tests" in text

    def test_group_by_suite_csv(self, tmp_path, capsys):
        conf = write_suite_config(tmp_path)
        out = tmp_path / "result.json"
        main(["run", "--worker", "builtin", "--config", str(conf), "--output", str(out)])
        code = main(
            ["report", "--baseline", str(out), "--inputs", str(out), "--group-by", "suite", "--format", "csv"]
        )
        assert code == 0
        text = capsys.readouterr().out
        assert "ghz" in text


class TestEstimate:
    def test_hand_arithmetic(self, tmp_path, capsys):
        device = {
            "name": "toy",
            "num_qubits": 1,
            "edges": [],
            "gate_durations": {"measure": 1e-4},
            "rep_delay": 2.5e-4,
        }
        # single-node device: edges may be empty only if num_qubits == 1
        dev_path = tmp_path / "toy.json"
        dev_path.write_text(json.dumps(device))
        qasm = tmp_path / "m.qasm"
        qasm.write_text(
            'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\n'
        )
        code = main(["estimate", "--qasm", str(qasm), "--device", str(dev_path)])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["shots"] == 4096
        assert doc["total_execution_s"] == pytest.approx(1.4336)

    def test_missing_duration_maps_to_usage_error(self, tmp_path):
        device = {
            "name": "toy",
            "num_qubits": 1,
            "edges": [],
            "gate_durations": {"rz": 1e-9},
            "rep_delay": 1e-4,
        }
        dev_path = tmp_path / "toy.json"
        dev_path.write_text(json.dumps(device))
        qasm = tmp_path / "h.qasm"
        qasm.write_text('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\nh q[0];\n')
        assert main(["estimate", "--qasm", str(qasm), "--device", str(dev_path)]) == 2


class TestList:
    def test_lists_workouts(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        assert "construct/qv-100-build" in out
        assert "transpile_abstract/" in out
        assert "[xfail]" in out
