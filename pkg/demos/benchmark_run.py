"""A miniature benchmark run: suite execution plus a normalized report.

Builds a small corpus in a temp directory, runs it through the builtin
worker, and renders the self-normalized aggregate table (all ratios 1.0
by construction).

Run: python demos/benchmark_run.py
"""
import tempfile
from pathlib import Path

from circuitbench import emit_qasm
from circuitbench.generators import gen_bv, gen_ghz, gen_qv
from circuitbench.harness import RunConfig, run_suite, status_counts
from circuitbench.report import METRICS, aggregate_table, normalize, render, render_status_summary

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    qasm_dir = tmp / "qasm"
    qasm_dir.mkdir()
    (qasm_dir / "ghz-4.qasm").write_text(emit_qasm(gen_ghz(4)))
    (qasm_dir / "bv-4-s1.qasm").write_text(emit_qasm(gen_bv("1011")))
    (qasm_dir / "qv-4-s1.qasm").write_text(emit_qasm(gen_qv(4, 2, seed=1)))
    (tmp / "ham").mkdir()

    config = RunConfig()
    config.qasm_dir = str(qasm_dir)
    config.hamiltonian_dir = str(tmp / "ham")
    config.topologies = ["all_to_all", "linear"]
    config.skip_file = str(tmp / "skipfile.txt")
    config.include_builtin_workouts = False
    config.timeout_s = 60.0

    records, document = run_suite(config, worker="builtin", output_path=tmp / "result.json")
    print(render_status_summary(status_counts(records)))

    docs = document["records"]
    series = [normalize(docs, docs, metric) for metric in METRICS]
    print(render(aggregate_table(series, by="topology"), "markdown"))
    print("(candidate == baseline, so every ratio is exactly 1)")
