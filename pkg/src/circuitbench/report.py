"""Baseline-normalized aggregation and table rendering.

Ratios are candidate/baseline per test, taken only over tests that PASSED
in both runs; groups aggregate with geometric mean and midpoint median.
Rendering is locale-independent with three significant digits.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)

METRICS = ("two_q_gates", "two_q_depth", "wall_time_s")


class ReportError(ValueError):
    pass


@dataclass
class RatioSeries:
    """Per-test candidate/baseline ratios for one metric."""

    metric: str
    ratios: list[tuple[str, float]] = field(default_factory=list)  # (test_id, ratio)
    excluded: int = 0  # tests dropped: not passed on both sides or zero baseline

    def values(self) -> list[float]:
        return [r for _, r in self.ratios]


@dataclass
class AggregateRow:
    group: str
    cells: dict[str, tuple[float, float, int]]  # metric -> (geomean, median, n)


def geometric_mean(values: list[float]) -> float:
    """exp of the mean of logs; requires a nonempty, all-positive input."""
    if not values:
        raise ReportError("geometric mean of empty input")
    logs = []
    for v in values:
        if v <= 0:
            raise ReportError(f"geometric mean needs positive values, got {v}")
        logs.append(math.log(v))
    return math.exp(math.fsum(logs) / len(logs))


def median(values: list[float]) -> float:
    """Midpoint convention: mean of the two central order statistics for even n."""
    if not values:
        raise ReportError("median of empty input")
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2:
        return ordered[mid]
    return 0.5 * (ordered[mid - 1] + ordered[mid])


def _passed_metrics(records: list[dict]) -> dict[str, dict]:
    return {r["test_id"]: r["metrics"] for r in records if r["status"] == "PASSED"}


def normalize(candidate_records: list[dict], baseline_records: list[dict], metric: str) -> RatioSeries:
    """Ratio series of candidate over baseline for one metric.

    Tests not PASSED on both sides are excluded and counted; a zero or
    missing baseline value excludes the test with a warning.
    """
    series = RatioSeries(metric)
    cand = _passed_metrics(candidate_records)
    base = _passed_metrics(baseline_records)
    all_ids = {r["test_id"] for r in candidate_records} | {r["test_id"] for r in baseline_records}
    for test_id in sorted(all_ids):
        if test_id not in cand or test_id not in base:
            series.excluded += 1
            continue
        b = base[test_id].get(metric)
        c = cand[test_id].get(metric)
        if not b or b <= 0 or c is None:
            logger.warning("excluding %s from %s ratios: unusable baseline value %r", test_id, metric, b)
            series.excluded += 1
            continue
        series.ratios.append((test_id, c / b))
    return series


# -- grouping ----------------------------------------------------------------------


def group_of(test_id: str, by: str) -> str:
    """Grouping key embedded in a test_id ('kind/name@topology').

    ``by='topology'`` takes the part after '@' (or the kind for tests
    without a target); ``by='suite'`` takes the name up to the first '-'.
    """
    kind, _, rest = test_id.partition("/")
    if by == "topology":
        if "@" in rest:
            return rest.rsplit("@", 1)[1]
        return kind
    if by == "suite":
        name = rest.rsplit("@", 1)[0]
        return name.split("-", 1)[0]
    raise ReportError(f"unknown grouping '{by}' (use 'topology' or 'suite')")


def aggregate_table(series_list: list[RatioSeries], by: str = "topology") -> list[AggregateRow]:
    """One row per group plus an 'All tests' row, aggregating each metric."""
    groups: dict[str, dict[str, list[float]]] = {}
    for series in series_list:
        for test_id, ratio in series.ratios:
            key = group_of(test_id, by)
            groups.setdefault(key, {}).setdefault(series.metric, []).append(ratio)

    def row_for(label: str, data: dict[str, list[float]]) -> AggregateRow:
        cells = {}
        for series in series_list:
            values = data.get(series.metric, [])
            if values:
                cells[series.metric] = (geometric_mean(values), median(values), len(values))
        return AggregateRow(label, cells)

    merged: dict[str, list[float]] = {}
    for data in groups.values():
        for metric, values in data.items():
            merged.setdefault(metric, []).extend(values)

    rows = [row_for("All tests", merged)]
    for label in sorted(groups):
        rows.append(row_for(label, groups[label]))
    return rows


def _fmt3(value: float) -> str:
    text = f"{value:.3g}"
    # pad bare integers so columns read uniformly: 1 -> 1.00
    if "e" not in text and "." not in text:
        text += "." + "0" * max(0, 3 - len(text))
    return text


def _cell(cells: dict, metric: str) -> str:
    if metric not in cells:
        return "-"
    gm, med, n = cells[metric]
    return f"{_fmt3(gm)}/{_fmt3(med)} (n={n})"


def render(rows: list[AggregateRow], fmt: str = "markdown", metrics: tuple[str, ...] = METRICS) -> str:
    """Render aggregate rows as a markdown or csv table with shared formatting."""
    if fmt == "markdown":
        lines = ["| Group | " + " | ".join(metrics) + " |"]
        lines.append("|" + "---|" * (len(metrics) + 1))
        for row in rows:
            lines.append(
                f"| {row.group} | " + " | ".join(_cell(row.cells, m) for m in metrics) + " |"
            )
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        lines = ["group," + ",".join(metrics)]
        for row in rows:
            lines.append(row.group + "," + ",".join(_cell(row.cells, m) for m in metrics))
        return "\n".join(lines) + "\n"
    raise ReportError(f"unknown render format '{fmt}' (use 'markdown' or 'csv')")


def status_summary(records: list[dict]) -> dict[str, int]:
    """Counts per status; always includes all four statuses."""
    counts = {"PASSED": 0, "SKIPPED": 0, "FAILED": 0, "XFAIL": 0}
    for record in records:
        status = record["status"]
        if status not in counts:
            raise ReportError(f"unknown status {status!r}")
        counts[status] += 1
    return counts


def render_status_summary(counts: dict[str, int]) -> str:
    total = sum(counts.values())
    lines = [f"total: {total}"]
    for status in ("PASSED", "SKIPPED", "FAILED", "XFAIL"):
        lines.append(f"{status.lower()}: {counts[status]}")
    return "\n".join(lines) + "\n"
