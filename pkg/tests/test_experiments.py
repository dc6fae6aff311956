import json
import subprocess
import sys

import pytest

from pdo_lab.experiments import REGISTRY, TOLERANCES, list_scenarios
from pdo_lab.experiments import registry as reg
from pdo_lab.experiments.cli import main
from pdo_lab.experiments.config import ConfigError, config_from_dict, load_config
from pdo_lab.experiments.corpus import make_corpus
from pdo_lab.experiments.runner import csv_text, run

REQUIRED = {"partition-check", "oscint-consistency", "mollify-convergence", "smoothing-split",
            "composition-order", "parametrix-residual", "boundedness-calibration", "index-invariance",
            "perturbation-openness", "interpolation-suite"}


def test_registry_contents():
    names = [s.name for s in list_scenarios()]
    assert REQUIRED <= set(names)
    assert names == sorted(names)
    assert all(len(s.anchors) >= 1 for s in list_scenarios())
    assert set(TOLERANCES) == set(REGISTRY)


def test_list_command(capsys):
    assert main(["list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert [ln.split()[0] for ln in lines] == sorted(REGISTRY)


def test_unknown_scenario_exit_code(capsys):
    assert main(["run", "--scenario", "no-such-thing"]) == 2
    assert "unknown scenario" in capsys.readouterr().err


def test_bad_config_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", "--config", str(bad)]) == 2
    neg = tmp_path / "neg.json"
    neg.write_text(json.dumps({"scenario": "partition-check", "tolerances": {"defect": -1}}))
    assert main(["run", "--config", str(neg)]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 2
    with pytest.raises(ConfigError):
        config_from_dict({"scenario": "partition-check", "tolerances": {"unknown": 1.0}}, env={})
    with pytest.raises(ConfigError):
        config_from_dict({"scenario": "mollify-convergence", "params": {"symbol": "nope"}}, env={})


def test_seed_override():
    cfg = config_from_dict({"scenario": "interpolation-suite", "seed": 3}, env={"PDO_LAB_SEED": "11"})
    assert cfg.seed == 11
    with pytest.raises(ConfigError):
        config_from_dict({"scenario": "interpolation-suite"}, env={"PDO_LAB_SEED": "x"})


def test_corpus_is_order_independent():
    a = make_corpus(5, 10)
    b = make_corpus(5, 4)
    for x, y in zip(a, b):
        assert x.case_id == y.case_id
        assert (x.params["f"]["coeffs"] == y.params["f"]["coeffs"]).all()
    assert not (make_corpus(6, 1)[0].params["f"]["coeffs"].shape == a[0].params["f"]["coeffs"].shape
                and (make_corpus(6, 1)[0].params["f"]["coeffs"] == a[0].params["f"]["coeffs"]).all())


def test_run_writes_deterministic_csv(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"scenario": "interpolation-suite", "seed": 2, "params": {"count": 6}}))
    outs = []
    for i, workers in enumerate(("1", "2")):
        out = tmp_path / f"o{i}"
        assert main(["run", "--config", str(cfg_path), "--out", str(out), "--workers", workers]) == 0
        outs.append((out / "interpolation-suite.csv").read_bytes())
    assert outs[0] == outs[1]
    assert b"\r\n" in outs[0]
    doc = json.loads((tmp_path / "o0" / "interpolation-suite.json").read_text())
    assert doc["status"] == 0 and len(doc["records"]) == 6
    assert "environment" in doc


def test_fail_verdict_exit_code(tmp_path):
    cfg = tmp_path / "strict.json"
    cfg.write_text(json.dumps({"scenario": "quantization-anchors", "tolerances": {"identity": 1e-300}}))
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    assert run(load_config(cfg)).records[0].verdict == "fail"


def test_runtime_error_exit_code(monkeypatch, tmp_path, capsys):
    def boom(case, tol, seed):
        raise RuntimeError("kaput")

    sc = reg.REGISTRY["partition-check"]
    monkeypatch.setitem(reg.REGISTRY, "partition-check", reg.Scenario(sc.name, sc.description, sc.anchors,
                                                                        sc.cases, boom))
    assert main(["run", "--scenario", "partition-check", "--out", str(tmp_path)]) == 3
    assert "default" in capsys.readouterr().err


def test_partition_scenario_passes():
    res = run(config_from_dict({"scenario": "partition-check"}, env={}))
    assert res.status == 0 and all(r.verdict == "pass" for r in res.records)
    assert csv_text(res.records).startswith("scenario,case_id,verdict")


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "pdo_lab.experiments", "list"], capture_output=True, text=True)
    assert out.returncode == 0 and "index-invariance" in out.stdout
