from __future__ import annotations

import json
import subprocess
import sys

import pytest

from quadorder.cli import build_parser, main


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv: str) -> dict:
    code, out, _ = run(capsys, *argv, "--format", "json")
    body = json.loads(out)
    assert body["schema"] == "1"
    assert body["ok"] is (code == 0)
    return body


def test_star_json(capsys):
    body = run_json(capsys, "star", "--d", "-2", "--f", "2", "--u", "0,1,0", "--v", "(0,1,0)")
    assert body["command"] == "star"
    assert body["result"]["star"] == ["1", "1", "0"] == body["result"]["oracle"]


def test_atoms_tsv(capsys):
    code, out, _ = run(capsys, "atoms", "--d", "-2", "--f", "2", "--max-m", "4", "--format", "tsv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split("\t") == ["m", "closed_form", "enumerated", "match"]
    assert [line.split("\t")[1] for line in lines[1:]] == ["0", "1", "2", "0"]


def test_factor(capsys):
    body = run_json(capsys, "factor", "--d", "-2", "--f", "2", "--t", "1,1,0")
    assert body["result"]["lengths"] == ["2"]
    assert body["result"]["catenary"] == "1"
    assert len(body["result"]["factorizations"]) == 3


def test_elements(capsys):
    body = run_json(capsys, "elements", "--d", "-2", "--f", "2", "--bound", "2")
    assert body["result"]["count"] == "5"


def test_classify_verify(capsys):
    body = run_json(capsys, "classify", "--d", "-2", "--f", "2", "--verify", "--bound", "8")
    res = body["result"]
    assert res["case"] == "squarefree"
    assert res["delta"] == ["1"]
    assert res["verification"]["invertible"]["ca_match"] is True


def test_sweep_and_unions(capsys):
    body = run_json(capsys, "sweep", "--d", "5", "--f", "9", "--p", "3", "--bound", "8", "--k", "2,3")
    assert body["result"]["delta"] == ["1", "2"]
    code, out, _ = run(capsys, "unions", "--d", "-2", "--f", "2", "--bound", "14", "--k", "2-5")
    assert code == 0
    assert "[4, 5, 6]" in out


def test_min_delta(capsys, tmp_path):
    body = run_json(capsys, "min-delta", "--d", "15", "--f", "2", "--pic", "2", "--h-K", "2")
    assert body["result"]["value"] == "2"
    data = tmp_path / "pic.txt"
    data.write_text("15 2 2 2\n")
    body = run_json(capsys, "min-delta", "--d", "15", "--f", "2", "--pic-data", str(data))
    assert body["result"]["pic"] == "2" and body["result"]["value"] == "2"
    body = run_json(capsys, "min-delta", "--d", "15", "--f", "2", "--h-K", "2", "--unit-index", "2")
    assert body["result"]["pic"] == "2"


def test_verify_commands(capsys):
    code, out, _ = run(capsys, "verify-atom-census", "--max-abs-d", "10", "--max-f", "12", "--format", "json")
    assert code == 0 and json.loads(out)["result"]["mismatches"] == []
    code, out, _ = run(capsys, "verify-classification")
    assert code == 0
    assert "MISMATCH" not in out
    for alias in ("verify-table1", "verify-thm11"):
        assert build_parser().parse_args([alias]).func is not None


@pytest.mark.parametrize(
    "argv",
    [
        ["atoms", "--d", "4", "--f", "2"],
        ["atoms", "--d", "3", "--f", "6"],
        ["atoms", "--d", "3", "--f", "6", "--p", "5"],
        ["star", "--d", "-2", "--f", "2", "--u", "0,1,1", "--v", "0,0,0"],
        ["factor", "--d", "-2", "--f", "2", "--t", "0,0,0"],
        ["min-delta", "--d", "10", "--f", "3", "--h-K", "2", "--unit-index", "3"],
    ],
)
def test_argument_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_parse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["star", "--d", "-2", "--f", "2", "--u", "1,2", "--v", "0,0,0"])
    assert exc.value.code == 2


def test_resource_limit_exit_3(capsys, monkeypatch):
    monkeypatch.setenv("QUADORDER_MAX_MODULUS", "100")
    code, _, err = run(capsys, "atoms", "--d", "17", "--f", "2", "--max-m", "8")
    assert code == 3 and "resource limit" in err


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "quadorder", "star", "--d", "5", "--f", "2", "--u", "1,0,0", "--v", "0,1,1"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert "(1,1,1)" in out.stdout


def test_oracle_disagreement_exit_4(capsys, monkeypatch):
    from quadorder.local_monoid import LocalMonoid, Triple

    monkeypatch.setattr(LocalMonoid, "lattice_mul", lambda self, s, t: Triple(9, 9, 9))
    code, out, _ = run(capsys, "star", "--d", "-2", "--f", "2", "--u", "0,1,0", "--v", "0,1,0")
    assert code == 4
    assert "MISMATCH" in out
