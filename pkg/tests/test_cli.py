import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from cmkinetic import cli
from cmkinetic.cm_analysis import CMReport, Criterion, Verdict
from cmkinetic.relaxation import ModelKind, ModelParams, phi_with_error

GOLDEN = Path(__file__).parent / "golden"

# one cheap invocation per command, used for the schema checks
INVOCATIONS = {
    "eval": ["eval", "--kind", "CC", "--alpha", "0.5", "--grid-lin", "0.5:2:4"],
    "spectrum": ["spectrum", "--kind", "CD", "--beta", "0.5", "--grid-log", "0.5:4:5"],
    "cm-check": ["cm-check", "--kind", "D", "--criterion", "derivatives", "--grid-log", "0.5:2:4"],
    "reconstruct": ["reconstruct", "--kind", "CD", "--beta", "0.5", "--grid-lin", "0.5:1:2"],
    "region-map": ["region-map", "--kind", "CCF", "--steps", "2x2"],
    "reduce-check": ["reduce-check", "--points", "2"],
}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# ---------------------------------------------------------------- schema


def golden_headers():
    lines = (GOLDEN / "csv_headers.txt").read_text().splitlines()
    return {cmd: header for cmd, header in (line.split(": ") for line in lines)}


@pytest.mark.parametrize("command", sorted(INVOCATIONS))
def test_csv_headers_match_golden(capsys, command):
    code, out, _ = run(capsys, *INVOCATIONS[command])
    assert code == 0
    assert out.splitlines()[0] == golden_headers()[command]


@pytest.mark.parametrize("command", sorted(INVOCATIONS))
def test_json_fields_match_golden(capsys, command):
    golden = json.loads((GOLDEN / "json_fields.json").read_text())
    code, out, _ = run(capsys, *INVOCATIONS[command], "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert sorted(doc) == sorted(golden["top"])
    assert doc["command"] == command
    for record in doc["records"]:
        assert list(record) == golden[command]
    if command == "cm-check":
        assert sorted(doc["records"][0]["report"]) == sorted(golden["report"])


def test_all_commands_covered():
    assert set(INVOCATIONS) == set(cli.COMMANDS) == set(golden_headers())


# ------------------------------------------------------------- examples


def test_eval_debye_reduction(capsys):
    code, out, _ = run(capsys, "eval", "--kind", "HN", "--alpha", "1", "--beta", "1", "--grid", "0:0.01:5")
    assert code == 0
    data = rows(out)
    assert len(data) == 501
    for row in data:
        assert float(row["phi"]) == pytest.approx(math.exp(-float(row["t"])), abs=1e-12)


def test_spectrum_cd_vanishes_below_one(capsys):
    code, out, _ = run(capsys, "spectrum", "--kind", "CD", "--beta", "0.5", "--grid-log", "0.01:100:200")
    assert code == 0
    data = rows(out)
    assert len(data) == 200
    low = [row for row in data if float(row["r"]) <= 1]
    assert low and all(float(row["K"]) == 0 for row in low)
    assert any(float(row["K"]) > 0 for row in data if float(row["r"]) > 1)


def test_region_map_ccf(capsys):
    code, out, _ = run(capsys, "region-map", "--kind", "CCF", "--axes", "alpha,gamma", "--steps", "9x9")
    assert code == 0
    data = rows(out)
    assert len(data) == 81
    for row in data:
        a, g = float(row["axis1"]), float(row["axis2"])
        expected = "NonnegEverywhere" if a <= g else "NegativeSomewhere"
        assert row["verdict"] == expected, (a, g)


def test_spectrum_numeric_route_agrees(capsys):
    argv = ["spectrum", "--kind", "HN", "--alpha", "0.5", "--beta", "0.5", "--grid-log", "0.1:10:5"]
    _, closed, _ = run(capsys, *argv)
    _, numeric, _ = run(capsys, *argv, "--route", "numeric")
    for c, n in zip(rows(closed), rows(numeric)):
        assert float(n["K"]) == pytest.approx(float(c["K"]), abs=1e-6)
        assert n["route"] != "ClosedForm"


def test_spectrum_ml3_and_kilbas_saigo(capsys):
    code, out, _ = run(capsys, "spectrum", "--kind", "ML3", "--alpha", "0.5", "--lambda", "0.5", "--grid-log", "0.1:10:3")
    assert code == 0 and len(rows(out)) == 3
    code, out, _ = run(capsys, "spectrum", "--kind", "KilbasSaigo", "--gamma", "0.5", "--grid-log", "0.1:10:3")
    assert code == 0 and all(float(row["K"]) >= 0 for row in rows(out))


def test_reconstruct_matches_phi(capsys):
    code, out, _ = run(capsys, "reconstruct", "--kind", "HN", "--alpha", "0.5", "--beta", "0.7")
    assert code == 0
    for row in rows(out):
        assert float(row["abs_diff"]) < 1e-6


def test_reduce_check_passes(capsys):
    code, out, _ = run(capsys, "reduce-check", "--points", "5")
    assert code == 0
    data = rows(out)
    assert len(data) == 8 and all(row["passed"] == "true" for row in data)


# ------------------------------------------------------------ round trip


@pytest.mark.parametrize(
    "kind, params",
    [(ModelKind.HN, ModelParams(alpha=0.6, beta=0.4)), (ModelKind.CCF, ModelParams(alpha=0.5, gamma=0.7))],
)
def test_eval_round_trip_is_bit_identical(capsys, tmp_path, kind, params):
    path = tmp_path / "out.csv"
    argv = ["eval", "--kind", kind.value, "--alpha", str(params.alpha), "--beta", str(params.beta)]
    argv += ["--gamma", str(params.gamma), "--grid-log", "0.01:20:30", "--out", str(path)]
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out == ""
    for row in rows(path.read_text()):
        value, err = phi_with_error(kind, params, float(row["t"]))
        assert float(row["phi"]) == value
        assert float(row["acc_est"]) == err


def test_json_round_trip(capsys):
    _, out, _ = run(capsys, "eval", "--kind", "CD", "--beta", "0.3", "--grid-lin", "0:3:7", "--format", "json")
    doc = json.loads(out)
    assert doc["grid_meta"]["grid"] == {"min": 0.0, "max": 3.0, "count": 7, "spacing": "linear"}
    for record in doc["records"]:
        assert record["phi"] == phi_with_error(ModelKind.CD, ModelParams(beta=0.3), record["t"])[0]


def test_output_is_deterministic(capsys):
    argv = INVOCATIONS["region-map"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_seventeen_digit_serialization():
    assert cli._fmt(0.1) == "0.10000000000000001"
    assert float(cli._fmt(1 / 3)) == 1 / 3


# ------------------------------------------------------------ exit codes


def test_cm_check_exit_codes(capsys):
    code, out, _ = run(capsys, "cm-check", "--kind", "CD", "--beta", "0.5")
    assert code == 0
    assert {row["verdict"] for row in rows(out)} == {"ConsistentWithCM"}
    code, out, _ = run(capsys, "cm-check", "--kind", "CCF", "--alpha", "0.9", "--gamma", "0.4")
    assert code == 3
    assert all(row["witness_test"] for row in rows(out))


def test_cm_check_inconclusive_exit():
    reports = [CMReport(Verdict.Inconclusive, Criterion.DerivativeSigns, 0.0, 1e-6, None)]
    assert cli._cm_exit(reports) == 4


def test_cm_check_bernstein_criterion(capsys):
    code, out, _ = run(capsys, "cm-check", "--kind", "HN", "--alpha", "0.5", "--beta", "0.5", "--criterion", "bernstein")
    assert code == 0 and rows(out)[0]["criterion"] == "DerivativeSigns"


@pytest.mark.parametrize(
    "argv, field",
    [
        (["eval", "--kind", "XX"], "kind"),
        (["eval", "--kind", "HN", "--alpha", "1.5"], "alpha"),
        (["eval", "--kind", "DF", "--gamma", "0.5", "--grid", "0:0.1:1"], "grid.min"),
        (["eval", "--kind", "D", "--grid-lin", "1:0:5"], "grid.min"),
        (["eval", "--kind", "D", "--grid-lin", "0:1:1"], "grid.count"),
        (["eval", "--kind", "D", "--grid", "0:0.1:1", "--grid-lin", "0:1:3"], "grid"),
        (["spectrum", "--kind", "ML3", "--alpha", "0.5"], "lambda"),
        (["region-map", "--kind", "CCF", "--axes", "alpha,sigma"], "axes"),
        (["region-map", "--kind", "CCF", "--steps", "3by3"], "steps"),
        (["reconstruct", "--kind", "DF", "--gamma", "0.5"], "kind"),
        (["reduce-check", "--points", "0"], "points"),
        (["eval"], "kind"),
    ],
)
def test_config_errors_exit_1(capsys, argv, field):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert field in err


def test_numeric_failure_exit_2(capsys):
    argv = ["reconstruct", "--kind", "CD", "--beta", "0.5", "--abs-tol", "1e-300", "--rel-tol", "1e-300"]
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "t=" in err


def test_config_file_with_flag_override(capsys, tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"kind": "CC", "alpha": 0.5, "grid-lin": "0.5:1:2"}))
    _, from_file, _ = run(capsys, "eval", "--config", str(path))
    _, from_flags, _ = run(capsys, "eval", "--kind", "CC", "--alpha", "0.5", "--grid-lin", "0.5:1:2")
    assert from_file == from_flags
    _, override, _ = run(capsys, "eval", "--config", str(path), "--alpha", "0.7")
    assert override != from_file
    path.write_text(json.dumps({"bogus": 1}))
    code, _, err = run(capsys, "eval", "--config", str(path))
    assert code == 1 and "bogus" in err


# ------------------------------------------------------------ parallelism


def test_thread_cap_gives_identical_output(capsys, monkeypatch):
    argv = ["eval", "--kind", "HN", "--alpha", "0.5", "--beta", "0.5", "--grid-log", "0.01:10:12"]
    monkeypatch.delenv("CMK_THREADS", raising=False)
    serial = run(capsys, *argv)[1]
    monkeypatch.setenv("CMK_THREADS", "3")
    parallel = run(capsys, *argv)[1]
    assert serial == parallel
    monkeypatch.setenv("CMK_THREADS", "zero")
    assert run(capsys, *argv)[0] == 1


def test_help_and_usage_errors_return_codes(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "eval", "--kind", "D", "--alpha", "abc")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cmkinetic", "eval", "--kind", "D", "--grid-lin", "0:1:3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "t,phi,acc_est"
