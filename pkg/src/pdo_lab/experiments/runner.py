"""Scenario execution and report emission."""

from __future__ import annotations

import csv
import io
import json
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .registry import Case, Outcome, get

__all__ = ["ReportRecord", "RunResult", "CaseError", "run", "write_reports", "csv_text"]

CSV_COLUMNS = ("scenario", "case_id", "verdict", "quantity", "value", "tolerance", "check")


class CaseError(RuntimeError):
    """A case raised; maps to exit status 3."""

    def __init__(self, case_id: str, cause: BaseException):
        super().__init__(f"case {case_id}: {type(cause).__name__}: {cause}")
        self.case_id = case_id


@dataclass
class ReportRecord:
    scenario: str
    case_id: str
    measured: dict
    tolerances: dict
    checks: dict
    verdict: str
    runtime: float
    note: str = ""


@dataclass
class RunResult:
    config: ExperimentConfig
    records: list[ReportRecord]
    runtime: float
    files: dict = field(default_factory=dict)

    @property
    def status(self) -> int:
        return 1 if any(r.verdict == "fail" for r in self.records) else 0


def _evaluate(scenario: str, case: Case, tol: dict, seed: int) -> tuple[Outcome | None, float, str]:
    t0 = time.perf_counter()
    try:
        out = get(scenario).evaluate(case, tol, seed)
    except Exception as exc:  # reported with the case id
        return None, time.perf_counter() - t0, f"{type(exc).__name__}: {exc}"
    return out, time.perf_counter() - t0, ""


def run(config: ExperimentConfig) -> RunResult:
    """Run every case of the configured scenario; raises :class:`CaseError` on the first crash."""
    sc = get(config.scenario)
    tol = config.merged_tolerances()
    cases = sc.cases(config.params, config.seed)
    t0 = time.perf_counter()
    if config.workers > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futs = [pool.submit(_evaluate, sc.name, c, tol, config.seed) for c in cases]
            results = [f.result() for f in futs]
    else:
        results = [_evaluate(sc.name, c, tol, config.seed) for c in cases]
    records = []
    for case, (out, dt, err) in zip(cases, results):
        if out is None:
            raise CaseError(case.case_id, RuntimeError(err))
        records.append(ReportRecord(sc.name, case.case_id, out.measured, out.tolerances, out.checks,
                                    out.verdict, dt, out.note))
    return RunResult(config, records, time.perf_counter() - t0)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def csv_text(records: list[ReportRecord]) -> str:
    """Long-format CSV, one row per measured quantity; runtimes are left out so reruns are byte-identical."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(CSV_COLUMNS)
    for r in records:
        for q in sorted(r.measured):
            tol = r.tolerances.get(q)
            chk = r.checks.get(q)
            w.writerow([r.scenario, r.case_id, r.verdict, q, _fmt(r.measured[q]),
                        "" if tol is None else _fmt(tol), "" if chk is None else _fmt(chk)])
        for q in sorted(set(r.checks) - set(r.measured)):
            w.writerow([r.scenario, r.case_id, r.verdict, q, "", _fmt(r.tolerances[q]) if q in r.tolerances else "",
                        _fmt(r.checks[q])])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if np.isfinite(f) else str(f)
    return v


def write_reports(result: RunResult, out: str | Path | None = None) -> dict[str, Path]:
    out = Path(out or result.config.out)
    out.mkdir(parents=True, exist_ok=True)
    name = result.config.scenario
    csv_path = out / f"{name}.csv"
    json_path = out / f"{name}.json"
    with open(csv_path, "w", newline="") as fh:
        fh.write(csv_text(result.records))
    doc = {
        "scenario": name,
        "seed": result.config.seed,
        "status": result.status,
        "environment": {"python": platform.python_version(), "numpy": np.__version__,
                        "platform": platform.platform(), "workers": result.config.workers,
                        "runtime": result.runtime},
        "records": [
            {"scenario": r.scenario, "case_id": r.case_id, "verdict": r.verdict, "runtime": r.runtime,
             "measured": _jsonable(r.measured), "tolerances": _jsonable(r.tolerances),
             "checks": _jsonable(r.checks), "note": r.note}
            for r in result.records
        ],
    }
    json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    result.files = {"csv": csv_path, "json": json_path}
    return result.files
