"""End-to-end behaviour of the ``ckquantum`` command line."""

from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from ckquantum.cli import InvalidInput, Report, main, parse_sigma, parse_slots


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.update(env or {})
    return subprocess.run([sys.executable, "-m", "ckquantum", *args],
                          capture_output=True, text=True, env=full_env, timeout=300)


@pytest.mark.parametrize("args,code", [
    (["--sigma", "id", "--j", "2,3", "--J", "2,3"], 0),
    (["--sigma", "id", "--j", "1,2", "--J", "1,2"], 1),
    (["--sigma", "1,4,3,5,2", "--j", "2,3", "--J", "1"], 0),
])
def test_check_examples(args, code):
    res = run("check", "--n", "5", *args)
    assert res.returncode == code, res.stderr
    assert ("admissible     yes" in res.stdout) == (code == 0)


def test_check_json_schema():
    res = run("check", "--n", "5", "--j", "1,2", "--J", "1,2", "--format", "json")
    data = json.loads(res.stdout)
    assert {"config", "verdicts", "catalog_diff"} <= set(data)
    v = data["verdicts"][0]
    assert set(v) == {"j", "J", "sigma", "antipode", "orthogonality", "rtt", "witnesses"}
    assert v["antipode"] is False and v["rtt"] is None
    assert v["witnesses"][0][0] == "antipode"


@pytest.mark.parametrize("args,flag,needle", [
    (["--sigma", "1,4,7,5,2"], "--sigma", "out of range"),
    (["--sigma", "1,2,2,4,5"], "--sigma", "appears twice"),
    (["--sigma", "1,x,3,4,5"], "--sigma", "not an integer"),
    (["--sigma", "1,2,3"], "--sigma", "expected 5 values"),
    (["--j", "2,9"], "--j", "slot out of range"),
    (["--j", "2", "--J", "3"], "--J", "not nilpotent"),
])
def test_check_input_errors(args, flag, needle):
    res = run("check", "--n", "5", *args)
    assert res.returncode == 2
    head, pointer = res.stderr.splitlines()[:2]
    assert head.startswith(f"error: {flag} ")
    assert needle in pointer
    # the caret sits under the offending token (or just past a short list)
    col = pointer.index("^")
    assert col == len(head) or head[col] not in " ,"


def test_bad_N():
    res = run("check", "--n", "9")
    assert res.returncode == 2 and "3..7" in res.stderr


def test_parsers():
    assert parse_sigma("id", 4) == (1, 2, 3, 4)
    assert parse_sigma("(2 4)(3 5)", 5) == (1, 4, 5, 2, 3)
    assert parse_sigma("1 4 3 5 2", 5) == (1, 4, 3, 5, 2)
    assert parse_slots("0b110", 5) == {1, 2}
    assert parse_slots("none", 5) == frozenset()
    assert parse_slots("1", 5, "--J") == frozenset()
    assert parse_slots("1", 5, "--j") == {1}
    with pytest.raises(InvalidInput):
        parse_slots("0b1", 5)


def test_sweep_n4_empty_diff():
    res = run("sweep", "--n", "4")
    assert res.returncode == 0
    assert "catalog diff: EMPTY" in res.stdout


def test_sweep_budget_exit_code():
    res = run("sweep", "--n", "6", "--budget", "1000")
    assert res.returncode == 3
    assert "174960" in res.stderr and res.stdout == ""


def test_sweep_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    r1 = run("sweep", "--n", "4", "--format", "json", "--out", str(a))
    r2 = run("sweep", "--n", "4", "--format", "json", "--out", str(b),
             env={"CKQUANTUM_WORKERS": "2"})
    assert r1.returncode == r2.returncode == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    keys = [(v["j"], v["J"], v["sigma"]) for v in data["verdicts"]]
    assert keys == sorted(keys)
    assert data["catalog_diff"] == {"missing": [], "extra": []}


def test_report_round_trip(tmp_path, capsys):
    assert main(["sweep", "--n", "3", "--format", "json", "--with-rtt"]) == 0
    text = capsys.readouterr().out
    rep = Report.from_json(text)
    assert rep.to_json() + "\n" == text
    assert any(v["rtt"] is False for v in rep.verdicts)


def test_full_vs_canonical_projection(capsys):
    proj = []
    for mode in ("full", "canonical"):
        main(["sweep", "--n", "5", "--sigma-mode", mode, "--format", "json"])
        data = json.loads(capsys.readouterr().out)
        proj.append({(tuple(v["j"]), tuple(v["J"])) for v in data["verdicts"]})
    assert proj[0] == proj[1]


def test_kinematics_command():
    res = run("kinematics")
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert "Galilei G(4)     none" in lines
    assert "Carroll C0(4)    none" in lines
    newton = [ln for ln in lines if ln.startswith("Newton N(4)") and " yes " in ln]
    assert len(newton) == 2
    assert lines[-1] == "chain: broken at E(4)->G(4)"


def test_catalog_command():
    res = run("catalog", "--n", "5", "--format", "json")
    assert res.returncode == 0
    items = json.loads(res.stdout)["catalog"]
    assert {"j", "J", "source", "sigma", "constraint"} == set(items[0])
    assert any(i["source"] == "T1 m=1" for i in items)
