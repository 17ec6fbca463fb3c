"""Scriptable stub worker for harness tests.

Usage: python stub_worker.py MODE [SENTINEL_PATH]

Modes:
  pass      reply with a tiny valid artifact
  sleep     hello, then sleep 30 s on any request (for timeout tests)
  die       hello, then exit mid-request without replying
  error     reply with a protocol error message
  limited   like pass but advertises only the construct capability
  tamper    like pass but reports wildly wrong worker metrics
"""
import json
import os
import sys
import time
from pathlib import Path

MODE = sys.argv[1] if len(sys.argv) > 1 else "pass"
if len(sys.argv) > 2:
    with open(sys.argv[2], "a") as fh:
        fh.write("spawned\n")

ARTIFACT = (
    'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\nh q[0];\ncx q[0], q[1];\n'
)


def emit(doc):
    doc["protocol_version"] = 1
    sys.stdout.write(json.dumps(doc) + "\n")
    sys.stdout.flush()


capabilities = ["construct"] if MODE == "limited" else [
    "construct", "manipulate", "transpile_abstract", "transpile_device"
]
emit({"type": "hello", "worker": f"stub-{MODE}", "version": "0", "capabilities": capabilities})

for line in sys.stdin:
    line = line.strip()
    if not line:
        continue
    msg = json.loads(line)
    test_id = msg.get("test_id", "?")
    if MODE == "sleep":
        time.sleep(30)
        continue
    if MODE == "die":
        os._exit(1)
    if MODE == "error":
        emit({"type": "error", "test_id": test_id, "message": "stub refuses"})
        continue
    scratch = Path(msg.get("scratch_dir", "."))
    path = scratch / "artifact.qasm"
    path.write_text(ARTIFACT)
    metrics = {"two_q_gates": 999999, "two_q_depth": 999999} if MODE == "tamper" else {}
    metrics["qasm_load_time_s"] = 0.001
    emit(
        {
            "type": "result",
            "test_id": test_id,
            "ok": True,
            "wall_time_s": 0.01,
            "artifact_path": str(path),
            "worker_metrics": metrics,
        }
    )
