import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from ldpc_trapping import cli
from ldpc_trapping.schemas import ERROR_SCHEMA, SCHEMAS

FIX = resources.files("ldpc_trapping.fixtures")


def fx(name):
    return str(FIX.joinpath(f"{name}.alist"))


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def validate(command, report):
    jsonschema.validate(report, SCHEMAS[command])


def test_check_ts_example(capsys):
    code, rep, err = run_json(capsys, "check-ts", fx("ts_3_3"), "--vars", "0,1,2")
    assert code == 0
    assert rep["isTrapping"] is True and rep["C"] == 3
    validate("check-ts", rep)
    assert err.startswith("effective-config: ")


def test_check_ts_negative_exit(capsys):
    code, rep, err = run_json(capsys, "check-ts", "--alist", fx("ts_4_2"), "--vars", "0,1,2")
    assert code == 1
    assert rep["isTrapping"] is False
    validate("check-ts", rep)
    jsonschema.validate(json.loads(err.splitlines()[-1]), ERROR_SCHEMA)


def test_bounds_example(capsys):
    code, rep, _ = run_json(capsys, "bounds", "--alpha", "0.1", "--rho", "6")
    assert code == 0 and rep["N"] == 55
    validate("bounds", rep)


def test_bounds_csv(capsys):
    code, out, _ = run(capsys, "bounds", "--alpha", "0.1", "--rho", "6", "--format", "csv")
    header, row = out.strip().splitlines()
    assert header == "alpha,rho,N,bound_at_N"
    assert row.split(",")[:3] == ["0.1", "6", "55"]


def test_bounds_girth_only(capsys):
    code, rep, _ = run_json(capsys, "bounds", "--n", "1000", "--rho", "6")
    assert code == 0 and rep["girthUpperBound"] == pytest.approx(16.0)
    validate("bounds", rep)


def test_girth_empty_graph(capsys, tmp_path):
    p = tmp_path / "empty.alist"
    p.write_text("0 0\n0 0\n\n\n")
    code, rep, _ = run_json(capsys, "girth", str(p))
    assert code == 0 and rep["girth"] == "acyclic"
    validate("girth", rep)
    code, out, _ = run(capsys, "girth", str(p), "--format", "text")
    assert out == "girth acyclic\n"


def test_girth_report(capsys):
    code, rep, _ = run_json(capsys, "girth", fx("cycle_10"))
    assert rep["girth"] == 10 and len(rep["witness"]) == 10
    validate("girth", rep)


def test_input_errors(capsys, tmp_path):
    code, out, err = run(capsys, "girth", str(tmp_path / "missing.alist"))
    assert code == 2 and out == ""
    msg = json.loads(err.splitlines()[-1])
    jsonschema.validate(msg, ERROR_SCHEMA)
    assert msg["kind"] == "input"
    bad = tmp_path / "bad.alist"
    bad.write_text("1 1\n3 3\nx\n")
    assert run(capsys, "girth", str(bad))[0] == 2
    assert run(capsys, "check-ts", fx("ts_3_3"), "--vars", "0,99")[0] == 2
    assert run(capsys, "check-ts", fx("ts_3_3"))[0] == 2
    assert run(capsys, "bounds", "--alpha", "2", "--rho", "6")[0] == 2


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["no-such-command"])
    assert info.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_decode_and_trace(capsys, tmp_path):
    trace = tmp_path / "t.jsonl"
    code, rep, _ = run_json(capsys, "decode", fx("ts_3_3"), "--vars", "0,1,2", "--max-iter", "5", "--trace", str(trace))
    assert code == 1
    assert rep["status"] == "max-iter-reached" and rep["support"] == [0, 1, 2]
    validate("decode", rep)
    lines = trace.read_text().splitlines()
    assert len(lines) == 5
    assert set(json.loads(lines[0])) == {"iter", "var_to_check", "check_to_var", "estimate"}
    code, rep, _ = run_json(capsys, "decode", fx("ts_3_3"), "--vars", "4", "--algo", "bit-flip")
    assert code == 0 and rep["failure"] is False
    validate("decode", rep)


def test_find_failures(capsys):
    code, rep, _ = run_json(capsys, "find-failures", fx("ts_2_2"), "--max-weight", "2")
    assert code == 0 and [0, 1] in rep["failingSupports"] and rep["exhaustive"]
    validate("find-failures", rep)
    code, rep, _ = run_json(capsys, "find-failures", fx("ts_3_3"), "--max-weight", "1")
    assert code == 1 and rep["failingSupports"] == []


def test_critical_number(capsys):
    code, rep, _ = run_json(capsys, "critical-number", fx("ts_4_2"), "--vars", "0,1,2,3")
    assert code == 0 and rep["criticalNumber"] == 3
    validate("critical-number", rep)
    code, rep, _ = run_json(capsys, "critical-number", fx("ts_4_2"), "--vars", "0,1,2")
    assert code == 1 and rep["isTrapping"] is False
    assert run(capsys, "critical-number", fx("ts_3_3"), "--vars", "0,1,2", "--rule", "B")[0] == 2


def test_guaranteed_failure(capsys, tmp_path):
    code, rep, _ = run_json(capsys, "guaranteed-failure", fx("cycle_10"), "--max-weight", "5")
    assert code == 0
    assert rep["report"]["size"] == 5 and rep["shortCycleClaim"]["result"] == "witness"
    validate("guaranteed-failure", rep)
    p = tmp_path / "tree.alist"
    p.write_text("1 3\n3 1\n3\n1 1 1\n1 2 3\n1\n1\n1\n")
    code, rep, _ = run_json(capsys, "guaranteed-failure", str(p))
    assert code == 1 and rep["report"]["girth"] == "acyclic"
    validate("guaranteed-failure", rep)


def test_sample_ensemble(capsys, tmp_path):
    code, rep, _ = run_json(capsys, "sample-ensemble", "--n", "8", "--rho", "6", "--seed", "3", "--count", "2", "--out", str(tmp_path))
    assert code == 0 and [g["seed"] for g in rep["graphs"]] == [3, 4]
    validate("sample-ensemble", rep)
    assert len(list(tmp_path.glob("*.alist"))) == 2
    code, rep, _ = run_json(capsys, "sample-ensemble", "--n", "20", "--rho", "4", "--girth-target", "6")
    assert code == 0 and rep["graphs"][0]["girth"] >= 6
    assert run(capsys, "sample-ensemble", "--n", "7", "--rho", "4")[0] == 2


def test_gadget(capsys, tmp_path):
    out = tmp_path / "g.alist"
    code, rep, _ = run_json(capsys, "gadget", "ts_3_3", "--complete", "--out", str(out))
    assert code == 0 and rep["completion"]["verdict"]["isTrapping"]
    validate("gadget", rep)
    assert out.read_text() == rep["completion"]["alist"]
    assert run(capsys, "gadget", "nope")[0] == 2


def test_simulate(capsys):
    args = ["simulate", fx("ts_3_3"), "--p", "0.05", "--trials", "700", "--seed", "4"]
    code, rep, _ = run_json(capsys, *args)
    assert code == 0 and rep["trials"] == 700
    validate("simulate", rep)
    _, rep2, _ = run_json(capsys, *args, "--jobs", "2")
    assert rep2["frameErrors"] == rep["frameErrors"]
    assert run(capsys, "simulate", fx("ts_3_3"), "--p", "0.9")[0] == 2


def test_verify_subset(capsys):
    code, rep, _ = run_json(capsys, "verify", "--criteria", "2,3,9")
    assert code == 0 and rep["passed"]
    validate("verify", rep)
    code, out, _ = run(capsys, "verify", "--criteria", "9", "--format", "text")
    assert out.startswith("[PASS] 9.")


def test_print_schema(capsys):
    code, out, _ = run(capsys, "check-ts", "--print-schema")
    assert code == 0 and json.loads(out) == SCHEMAS["check-ts"]


def test_every_schema_is_valid():
    for schema in list(SCHEMAS.values()) + [ERROR_SCHEMA]:
        jsonschema.Draft202012Validator.check_schema(schema)
    assert set(SCHEMAS) == set(cli.COMMANDS)


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--p", "0.04", "--trials", "600", "--jobs", "2"],
        ["find-failures", "--max-weight", "3", "--budget", "300", "--seed", "9"],
        ["critical-number", "--vars", "0,1,2"],
    ],
)
def test_byte_identical_runs(argv):
    cmd = [sys.executable, "-m", "ldpc_trapping", argv[0], fx("ts_3_3"), *argv[1:]]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    assert a.stdout == b.stdout and a.stderr == b.stderr
    assert a.returncode == b.returncode
