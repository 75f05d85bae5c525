from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from loopcoh.cli import main

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "loopcoh-report/1"
    return doc


def test_classify_polynomial(capsys):
    doc = report(capsys, "classify", "--builtin", "cpinf-eta-plus-r", "--prime", "2")
    res = doc["results"][0]
    assert res["verdict"] == "Polynomial"
    counts = {r["degree"]: r["count"] for r in res["generators"]["counts"]}
    assert [counts[d] for d in (2, 4, 6, 8)] == [1, 1, 2, 3]


def test_classify_exterior_text(capsys):
    code, out, _ = run(capsys, "classify", "--builtin", "spin3", "--prime", "2")
    assert code == 0 and "Exterior" in out


def test_e2_circle(capsys):
    doc = report(capsys, "e2", "--builtin", "cpinf-eta", "--prime", "2", "--max-degree", "12")
    assert [r["dim"] for r in doc["results"][0]["total_dims"]] == [1, 1] + [0] * 11


def test_local_global(capsys):
    doc = report(capsys, "local-global", "--builtin", "spin3", "--prime", "3", "--prime", "5",
                 "--prime", "7", "--exclude", "2")
    assert doc["result"]["polynomial"] and doc["result"]["ring"] == "Z[1/2]"


def test_space_file_and_out(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "series", "--space", str(DATA / "sigma_cp_inf.json"),
                     "--prime", "3", "--format", "json", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["max_degree"] == 16


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "series", "--builtin", "cpinf-eta")[0] == 3
    assert run(capsys, "classify", "--builtin", "cpinf-eta", "--strict")[0] == 3
    assert run(capsys, "classify", "--builtin", "cpinf-eta")[0] == 0
    assert run(capsys, "classify", "--builtin", "nope")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": "loopcoh-space/1", "name": "b"}')
    code, _, err = run(capsys, "classify", "--space", str(bad))
    assert code == 2 and "error" in err
    assert run(capsys, "series", "--space", str(DATA / "sigma_cp_inf.json"),
               "--prime", "5")[0] == 2


def test_invariant_exit_code(capsys, monkeypatch):
    from loopcoh import cli
    from loopcoh.grfield import DifferentialError

    def broken(*args, **kwargs):
        raise DifferentialError("d^2 != 0", (-2, 6))

    monkeypatch.setattr(cli, "build_report", broken)
    assert run(capsys, "e2", "--builtin", "cpinf-eta")[0] == 4


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and "spin3" in out.split()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "loopcoh", "series", "--builtin", "sphere-3",
                           "--max-degree", "6", "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["results"][0]
