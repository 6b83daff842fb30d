import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from excesslocus.cli import main, parse_degrees, parse_range, InputError
from excesslocus.gfpoly.lab import reports_from_json

GOLDEN = Path(__file__).parent / "golden"


def run(*args, env=None):
    return subprocess.run(
        [sys.executable, "-m", "excesslocus", *args],
        capture_output=True,
        text=True,
        env={**os.environ, **(env or {})},
    )


def test_parse_range():
    assert parse_range("2..4") == [2, 3, 4]
    assert parse_range("1,3") == [1, 3]
    assert parse_range("5") == [5]
    with pytest.raises(InputError):
        parse_range("a..b")


def test_parse_degrees():
    assert parse_degrees("1,5") == (1, 5)
    with pytest.raises(InputError, match="non-decreasing"):
        parse_degrees("5,1")


def test_catalog_golden():
    out = run("catalog", "--rmax", "4", "--format", "csv", "--no-timestamp")
    assert out.returncode == 0
    assert out.stdout == (GOLDEN / "catalog_rmax4.csv").read_text()
    rows = list(csv.DictReader(io.StringIO(out.stdout)))
    assert [(int(r["codim_hyperplane"]), int(r["codim_quadric"])) for r in rows] == [(4, 5), (9, 9), (16, 14)]


def test_bruteforce_golden():
    out = run("bruteforce", "--r", "2", "--d", "1,1", "--q", "2,3,4", "--format", "csv", "--no-timestamp")
    assert out.returncode == 0
    assert out.stdout == (GOLDEN / "bruteforce_r2_d11.csv").read_text()
    rows = list(csv.DictReader(io.StringIO(out.stdout)))
    assert [int(r["count_excess"]) for r in rows] == [22, 105, 316]


def test_bound_golden_and_text():
    out = run("bound", "--r", "2", "--a", "1", "--d", "1,5", "--b", "2", "--format", "json", "--no-timestamp")
    assert out.returncode == 0
    assert out.stdout == (GOLDEN / "bound_r2_d15_b2.json").read_text()
    assert json.loads(out.stdout)["bound"] == 11
    text = run("bound", "--r", "2", "--a", "1", "--d", "1,5", "--b", "2")
    assert text.stdout.startswith("bound = 11")


def test_timestamp_present_by_default():
    out = run("catalog", "--rmax", "2", "--format", "json")
    assert "generated_at" in json.loads(out.stdout)
    out = run("catalog", "--rmax", "2", "--format", "csv")
    assert out.stdout.splitlines()[0].endswith("generated_at")
    out = run("catalog", "--rmax", "2")
    assert "generated_at" not in out.stdout


def test_bruteforce_json_roundtrip(tmp_path):
    path = tmp_path / "out.json"
    code = main(["bruteforce", "--r", "2", "--d", "1,2", "--q", "2", "--format", "json", "-o", str(path)])
    assert code == 0
    (rep,) = reports_from_json(path.read_text())
    assert rep.count_excess == 120 and rep.N == 9


def test_workers_do_not_change_output():
    args = ["bruteforce", "--r", "2", "--d", "2,2", "--q", "3", "--sampled", "--seed", "7",
            "--n", "40000", "--format", "csv", "--no-timestamp"]
    one = run(*args, "--workers", "1")
    two = run(*args, "--workers", "2")
    env = run(*args, env={"EXCESSLOCUS_WORKERS": "2"})
    assert one.returncode == 0
    assert one.stdout == two.stdout == env.stdout


def test_check_theorem_single_and_grid():
    out = run("check-theorem", "--r", "2", "--a", "1", "--d", "1,5", "--format", "csv", "--no-timestamp")
    assert out.returncode == 0
    assert out.stdout.splitlines()[1] == '2,1,"1,5",2,11,7,6,True'
    out = run("check-theorem", "--r", "2..4", "--a", "1..2", "--d-range", "1..3")
    assert out.returncode == 0 and out.stdout.startswith("PASS")


def test_check_theorem_margin_failure_exit_code(monkeypatch):
    from excesslocus import bounds

    monkeypatch.setattr(bounds, "chain_lower_bound", lambda inst, b: 10**6)
    assert main(["check-theorem", "--r", "2", "--a", "1", "--d", "1,1", "--no-timestamp"]) == 2


@pytest.mark.parametrize(
    "args",
    [
        ["bound", "--r", "2", "--d", "5,1", "--b", "2"],
        ["bound", "--r", "2", "--d", "1,1", "--b", "3"],
        ["hilbert", "--r", "x", "--a", "1", "--d", "1"],
        ["catalog", "--rmax", "1"],
        ["bruteforce", "--r", "2", "--d", "1,1", "--q", "6"],
        ["bruteforce", "--r", "2", "--d", "2,2", "--q", "5"],
        ["bruteforce", "--r", "2", "--d", "1,1", "--sampled"],
        ["bruteforce", "--r", "4", "--d", "1,1,1"],
        ["catalog"],
        ["nonsense"],
    ],
)
def test_input_errors_exit_1(args):
    out = run(*args)
    assert out.returncode == 1, out.stderr
    assert "error" in out.stderr
