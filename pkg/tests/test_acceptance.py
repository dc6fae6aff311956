"""Acceptance criteria 1-10, one pass/fail line each.

Tolerances come from ``pdo_lab.experiments.registry.TOLERANCES``; the
registry scenarios are the code paths under test.
"""

import time

import numpy as np
import pytest

from pdo_lab.experiments import TOLERANCES
from pdo_lab.experiments.config import config_from_dict
from pdo_lab.experiments.runner import run


def _run(name, **params):
    cfg = config_from_dict({"scenario": name, "params": params} if params else {"scenario": name}, env={})
    t0 = time.perf_counter()
    res = run(cfg)
    return res, time.perf_counter() - t0


def _report(log, number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    log.append(line)
    print(line)
    assert ok, line


def test_criterion_01_partition_of_unity(acceptance_log):
    res, dt = _run("partition-check", grid=[1, 64.0, 2048])
    tol = TOLERANCES["partition-check"]
    d = res.records[0].measured["defect"]
    ok = d <= tol["defect"] and dt < tol["runtime"]
    _report(acceptance_log, 1, "partition of unity", ok, f"defect={d:.2e}, {dt:.2f}s")


def test_criterion_02_quantization_anchors(acceptance_log):
    res, dt = _run("quantization-anchors")
    m = res.records[0].measured
    tol = TOLERANCES["quantization-anchors"]
    ok = res.records[0].verdict == "pass" and dt < tol["runtime"]
    _report(acceptance_log, 2, "quantization anchors", ok,
            f"id={m['identity']:.1e}, d/dx={m['derivative']:.1e}, bessel={m['bessel_roundtrip']:.1e}, {dt:.2f}s")


def test_criterion_03_oscillatory_integrals(acceptance_log):
    res, dt = _run("oscint-consistency")
    m = {k: v for r in res.records for k, v in r.measured.items()}
    tol = TOLERANCES["oscint-consistency"]
    ok = all(r.verdict == "pass" for r in res.records) and dt < tol["runtime"]
    _report(acceptance_log, 3, "oscillatory integral consistency", ok,
            f"routes={m['route_gap']:.1e}, g(0)={m['g_eta']:.1e}, orders={m['order_gap']:.1e}, {dt:.1f}s")


def test_criterion_04_mollifier_convergence(acceptance_log):
    res, dt = _run("mollify-convergence")
    tol = TOLERANCES["mollify-convergence"]
    parts = [f"{r.case_id}: ratio={r.measured['final_ratio']:.3f} slope={r.measured['slope']:.2f} "
             f"decreasing={bool(r.measured['strictly_decreasing'])}" for r in res.records]
    ok = all(r.verdict == "pass" for r in res.records) and dt < tol["runtime"]
    _report(acceptance_log, 4, "mollifier convergence", ok, "; ".join(parts) + f", {dt:.1f}s")


def test_criterion_05_smoothing_split(acceptance_log):
    res, dt = _run("smoothing-split")
    tol = TOLERANCES["smoothing-split"]
    ex = max(r.measured["exactness"] for r in res.records if "exactness" in r.measured)
    dev = [f"{r.case_id}: fit={r.measured['fit']:.3f} pred={r.measured['predicted']:.3f}"
           for r in res.records if "fit" in r.measured]
    ok = all(r.verdict == "pass" for r in res.records) and dt < tol["runtime"]
    _report(acceptance_log, 5, "smoothing split", ok, f"exactness={ex:.1e}; " + "; ".join(dev) + f", {dt:.1f}s")


def test_criterion_06_composition_order(acceptance_log):
    res, dt = _run("composition-order")
    tol = TOLERANCES["composition-order"]
    parts = [f"{r.case_id}: " + ", ".join(f"{r.measured[f'err_k{k}']:.2e}" for k in (1, 2, 3)) for r in res.records]
    ok = all(r.verdict == "pass" for r in res.records) and dt < tol["runtime"]
    _report(acceptance_log, 6, "composition order", ok, "; ".join(parts) + f", {dt:.1f}s")


def test_criterion_07_parametrix_residual(acceptance_log):
    res, dt = _run("parametrix-residual")
    tol = TOLERANCES["parametrix-residual"]
    m = res.records[0].measured
    ok = res.records[0].verdict == "pass" and dt < tol["runtime"]
    _report(acceptance_log, 7, "parametrix residual", ok,
            f"8: {m['res_8']:.3e}, 16: {m['res_16']:.1e}, 32: {m['res_32']:.1e}, {dt:.1f}s")


def test_criterion_08_index_invariance(acceptance_log):
    res, dt = _run("index-invariance")
    tol = TOLERANCES["index-invariance"]
    parts = [f"{r.case_id}: ({r.measured['kernel']},{r.measured['cokernel']},{r.measured['index']:+d}) "
             f"wind={r.measured['winding']:+d} gap={r.measured['min_gap']:.1e}" for r in res.records]
    ok = all(r.verdict == "pass" for r in res.records) and dt < tol["runtime"]
    _report(acceptance_log, 8, "index and invariance", ok, "; ".join(parts) + f", {dt:.1f}s")


def test_criterion_09_openness(acceptance_log):
    res, dt = _run("perturbation-openness")
    tol = TOLERANCES["perturbation-openness"]
    m = res.records[0].measured
    radii = ", ".join(f"{k}={v:.3f}" for k, v in m.items() if k.startswith("radius"))
    ok = res.records[0].verdict == "pass" and dt < tol["runtime"]
    _report(acceptance_log, 9, "openness echo", ok, f"{radii}, spread={m['spread']:.3f}, {dt:.1f}s")


def test_criterion_10_inequality_suites(acceptance_log):
    res, dt = _run("interpolation-suite", count=100)
    tol = TOLERANCES["interpolation-suite"]
    fails = [r.case_id for r in res.records if r.verdict == "fail"]
    worst = {}
    for r in res.records:
        for k, v in r.measured.items():
            worst[k] = max(worst.get(k, 0.0), v)
    ok = len(res.records) == 100 and not fails and dt < tol["runtime"]
    _report(acceptance_log, 10, "inequality suites", ok,
            f"{len(res.records)} cases, {len(fails)} failures, worst translate={worst['translate']:.2f}, {dt:.1f}s")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
