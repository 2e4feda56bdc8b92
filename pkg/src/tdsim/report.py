"""Run output: CSV time series, summary metrics, comparisons and sweeps."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from contextlib import nullcontext
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import IO, Sequence, Union

import numpy as np

from tdsim.engine import RunResult
from tdsim.scenario import ScenarioSpec, resolve_path, with_value

# CSV column -> recorded variable
CSV_COLUMNS = {
    "t_months": None,
    "backlog_fp": "backlog",
    "production_library_fp": "production_library",
    "technical_debt_mh": "technical_debt",
    "total_effort_mh": "total_effort",
    "maintainability": "maintainability",
    "productivity_ratio": "productivity_ratio",
    "allocation": "allocation_level",
    "new_requirements_rate_fp_mo": "new_requirements_rate",
    "perfective_rate_fp_mo": "perfective_rate",
    "preventive_rate_mh_mo": "preventive_rate",
    "debt_accrual_rate_mh_mo": "debt_accrual_rate",
}

Destination = Union[str, Path, IO[str]]


def _fmt(x: float) -> str:
    # shortest round-trip decimal, never scientific for integral values
    return repr(float(x))


def _open(destination: Destination):
    if isinstance(destination, (str, Path)):
        return open(destination, "w", newline="")
    return nullcontext(destination)


def write_csv(run: RunResult, destination: Destination) -> None:
    cols = [run.times if src is None else run[src] for src in CSV_COLUMNS.values()]
    with _open(destination) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in zip(*cols):
            w.writerow([_fmt(v) for v in row])


def csv_text(run: RunResult) -> str:
    buf = io.StringIO()
    write_csv(run, buf)
    return buf.getvalue()


@dataclass(frozen=True)
class SummaryMetrics:
    horizon: float
    final_backlog: float
    final_production_library: float
    final_technical_debt: float
    final_total_effort: float
    final_allocation: float
    final_maintainability: float
    final_productivity_ratio: float
    min_maintainability: float
    min_maintainability_time: float
    equilibrium_allocation: float
    delivered_fp: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


SUMMARY_FIELDS = tuple(f.name for f in fields(SummaryMetrics))


def summarize(run: RunResult, equilibrium_window: float = 24.0) -> SummaryMetrics:
    m = run["maintainability"]
    i_min = int(np.argmin(m))
    tail = run.times > run.horizon - equilibrium_window
    return SummaryMetrics(
        horizon=run.horizon,
        final_backlog=run.final("backlog"),
        final_production_library=run.final("production_library"),
        final_technical_debt=run.final("technical_debt"),
        final_total_effort=run.final("total_effort"),
        final_allocation=run.final("allocation_level"),
        final_maintainability=run.final("maintainability"),
        final_productivity_ratio=run.final("productivity_ratio"),
        min_maintainability=float(m[i_min]),
        min_maintainability_time=float(run.times[i_min]),
        equilibrium_allocation=float(np.mean(run["allocation_level"][tail])),
        delivered_fp=run.final("production_library") - run.initial("production_library"),
    )


def format_summary(metrics: SummaryMetrics, title: str = "") -> str:
    lines = [f"summary {title}".rstrip()]
    width = max(map(len, SUMMARY_FIELDS))
    for k, v in metrics.as_dict().items():
        lines.append(f"  {k:<{width}}  {v:.6g}")
    return "\n".join(lines)


# metric -> +1 if higher is better, -1 if lower is better
COMPARED_METRICS = {
    "delivered_fp": +1,
    "final_backlog": -1,
    "final_productivity_ratio": +1,
    "final_technical_debt": -1,
}


@dataclass(frozen=True)
class ComparisonRow:
    metric: str
    a: float
    b: float
    difference: float  # b - a
    verdict: str  # "a better", "b better" or "tie"


@dataclass(frozen=True)
class ComparisonReport:
    label_a: str
    label_b: str
    rows: tuple[ComparisonRow, ...]

    def winner_on_all(self) -> str | None:
        verdicts = {r.verdict for r in self.rows}
        if len(verdicts) == 1 and verdicts != {"tie"}:
            return self.label_a if verdicts == {"a better"} else self.label_b
        return None

    def to_dict(self) -> dict:
        return {
            "a": self.label_a,
            "b": self.label_b,
            "metrics": [asdict(r) for r in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def render(self) -> str:
        head = ("metric", self.label_a, self.label_b, "b - a", "verdict")
        body = [(r.metric, f"{r.a:.6g}", f"{r.b:.6g}", f"{r.difference:+.6g}", _verdict_text(self, r)) for r in self.rows]
        widths = [max(len(row[i]) for row in [head, *body]) for i in range(len(head))]
        out = []
        for row in [head, *body]:
            cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:4], widths[1:4])] + [row[4]]
            out.append("  ".join(cells).rstrip())
        return "\n".join(out) + "\n"


def _verdict_text(report: ComparisonReport, row: ComparisonRow) -> str:
    if row.verdict == "tie":
        return "tie"
    return f"{report.label_a if row.verdict == 'a better' else report.label_b} better"


def compare(a: SummaryMetrics, b: SummaryMetrics, label_a: str = "a", label_b: str = "b") -> ComparisonReport:
    if not math.isclose(a.horizon, b.horizon, rel_tol=1e-9):
        raise ValueError(f"cannot compare runs with different horizons ({a.horizon!r} vs {b.horizon!r})")
    rows = []
    for metric, sense in COMPARED_METRICS.items():
        va, vb = getattr(a, metric), getattr(b, metric)
        diff = vb - va
        if va == vb:
            verdict = "tie"
        elif (vb > va) == (sense > 0):
            verdict = "b better"
        else:
            verdict = "a better"
        rows.append(ComparisonRow(metric, va, vb, diff, verdict))
    return ComparisonReport(label_a, label_b, tuple(rows))


class SweepValueError(ValueError):
    def __init__(self, value: float, cause: Exception):
        super().__init__(f"sweep value {value!r} is invalid: {cause}")
        self.value = value


@dataclass(frozen=True)
class SweepRow:
    value: float
    metrics: SummaryMetrics


def _run_summary(spec: ScenarioSpec) -> SummaryMetrics:
    return summarize(spec.run())


def sweep(
    base: ScenarioSpec, path: str, values: Sequence[float], max_workers: int | None = None
) -> list[SweepRow]:
    """One independent run per value, returned in input order.

    ``max_workers > 1`` fans the runs out over processes.
    """
    resolve_path(base, path)
    specs = []
    for v in values:
        try:
            specs.append(with_value(base, path, v))
        except ValueError as exc:
            raise SweepValueError(v, exc) from exc
    if max_workers and max_workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            metrics = list(pool.map(_run_summary, specs))
    else:
        metrics = [_run_summary(s) for s in specs]
    return [SweepRow(v, m) for v, m in zip(values, metrics)]


def write_sweep_csv(rows: Sequence[SweepRow], destination: Destination, value_column: str = "value") -> None:
    with _open(destination) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([value_column, *SUMMARY_FIELDS])
        for row in rows:
            w.writerow([_fmt(row.value), *(_fmt(getattr(row.metrics, f)) for f in SUMMARY_FIELDS)])
