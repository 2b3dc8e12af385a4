import csv
import io
import json

import pytest

from ostroquad.bounds import REPORT_KEYS
from ostroquad.cli import fmt_float, run_command
from ostroquad.quadrature import CSV_COLUMNS


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


CHECK_26 = ("check", "--ineq", "2.6", "--function", "square", "--weight", "unit",
            "--a", "0", "--b", "1", "--x", "0.5")


def test_check_example():
    code, out, _ = run(*CHECK_26)
    assert code == 0
    rec = json.loads(out)
    assert list(rec) == list(REPORT_KEYS)
    assert rec["lhs"] == pytest.approx(1 / 12, abs=1e-9)
    assert rec["rhs"] == 0.25 and rec["holds"] is True


def test_ineq_id_forms_agree():
    by_number = run(*CHECK_26)[1]
    argv = list(CHECK_26)
    argv[2] = "UNWEIGHTED_2_6"
    assert run(*argv)[1] == by_number


def test_means_strict_violation():
    code, out, _ = run("means", "--case", "C3_2", "--a", "1", "--b", "2", "--strict")
    assert code == 1
    assert json.loads(out)["holds"] is False
    code, _, _ = run("means", "--case", "C3_2", "--a", "1", "--b", "2")
    assert code == 0


def test_list():
    code, out, _ = run("list")
    assert code == 0
    reg = json.loads(out)
    assert "sqrt_ln" in reg["functions"] and set(reg["weights"]) >= {"unit", "inv_sqrt"}
    code, out, _ = run("--format", "csv", "list")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == len(reg["functions"]) + len(reg["weights"])


@pytest.mark.parametrize(
    "argv",
    [
        ("check", "--ineq", "9.9", "--function", "square", "--a", "0", "--b", "1", "--x", "0.5"),
        ("check", "--ineq", "2.6", "--function", "nope", "--a", "0", "--b", "1", "--x", "0.5"),
        ("check", "--ineq", "2.6", "--function", "square", "--a", "1", "--b", "0", "--x", "0.5"),
        ("check", "--ineq", "2.1", "--function", "square", "--weight", "inv_sqrt", "--a", "-1", "--b", "1", "--x", "0"),
        ("check", "--ineq", "2.6", "--function", "square", "--a", "0", "--b", "1", "--x", "2"),
        ("integrate", "--function", "square", "--a", "0", "--b", "1"),
        ("integrate", "--function", "square", "--a", "0", "--b", "1", "--n", "0"),
        ("converge", "--function", "square", "--a", "0", "--b", "1", "--ns", "1,x"),
        ("audit", "--function", "square", "--a", "0", "--b", "1"),
        ("means", "--case", "C3_6", "--a", "1", "--b", "2"),
        ("means", "--case", "C3_6", "--a", "1", "--b", "2", "--p", "1"),
        ("verify", "--suite", "nope"),
        ("frobnicate",),
        (),
    ],
)
def test_invalid_input_exit_2(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert out == ""
    assert err.strip()


def test_integrate_fixed_n():
    code, out, _ = run("integrate", "--function", "square", "--a", "0", "--b", "1", "--n", "2")
    assert code == 0
    rec = json.loads(out)
    assert rec["estimate"] == 0.3125
    assert rec["bound"] == 0.0625
    assert rec["error"] == pytest.approx(1 / 48, rel=1e-8)
    assert len(rec["intervals"]) == 2


def test_integrate_random_xi_is_seeded():
    argv = ("integrate", "--function", "exp", "--a", "0", "--b", "1", "--n", "5", "--xi", "random")
    a = run(*argv, "--seed", "3")[1]
    assert a == run(*argv, "--seed", "3")[1]
    assert a != run(*argv, "--seed", "4")[1]
    assert json.loads(a)["bound"] >= json.loads(a)["error"]


def test_integrate_tol():
    code, out, _ = run("integrate", "--function", "exp", "--a", "0", "--b", "1", "--tol", "1e-6")
    assert code == 0
    rec = json.loads(out)
    assert rec["bound"] <= 1e-6 and rec["error"] <= rec["bound"]


def test_integrate_tol_not_met(monkeypatch):
    import ostroquad.quadrature as q

    real = q.adaptive_integrate
    monkeypatch.setattr(q, "adaptive_integrate", lambda *a, **k: real(*a, max_intervals=8, **k))
    code, out, err = run("integrate", "--function", "exp", "--a", "0", "--b", "1", "--tol", "1e-12")
    assert code == 2
    assert "error" in err
    assert json.loads(out)["n"] == 8


def test_converge_csv_matches_json():
    argv = ("converge", "--function", "square", "--a", "0", "--b", "1", "--ns", "1,2,4,8")
    j = json.loads(run(*argv)[1])
    code, out, _ = run("--format", "csv", *argv)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == list(CSV_COLUMNS)
    assert len(rows) == len(j) == 4
    for r, exp in zip(rows, (1 / 12, 1 / 48, 1 / 192, 1 / 768)):
        assert float(r["error"]) == pytest.approx(exp, rel=1e-8)


def test_audit_command():
    code, out, _ = run("audit", "--function", "exp", "--weight", "inv_sqrt", "--a", "1", "--b", "4", "--x", "2")
    assert code == 0
    steps = json.loads(out)
    assert [s["step"] for s in steps] == ["S1_kernel_integral", "S2_meanvalue", "S3_abs_kernel"]
    assert steps[0]["lhs"] == pytest.approx(-0.666666667, abs=1e-9)
    assert steps[0]["rhs"] == pytest.approx(-1.06066017, abs=1e-8)
    assert set(steps[0]) == {"step", "lhs", "rhs", "discrepancy"}


def test_verify_json_and_csv():
    argv = ("verify", "--suite", "weighted_invsqrt", "--samples", "10", "--seed", "1")
    code, out, _ = run(*argv)
    assert code == 0
    rec = json.loads(out)
    assert rec["samples"] == 10 and len(rec["sample_log"]) == 10
    assert rec["per_inequality"]["MIDPOINT_2_7"]["violated"] >= 1
    code, csv_out, _ = run("--format", "csv", *argv)
    rows = list(csv.DictReader(io.StringIO(csv_out)))
    assert len(rows) == 10 * 3
    assert run(*argv, "--strict")[0] == 1


def test_byte_identical_output():
    for argv in (CHECK_26, ("verify", "--suite", "unweighted_default", "--samples", "20", "--seed", "7"),
                 ("means", "--case", "C3_5", "--a", "1", "--b", "3", "--x", "2", "--p", "-0.3")):
        assert run(*argv)[1] == run(*argv)[1]


def test_fmt_float():
    assert fmt_float(1 / 3) == 0.333333333
    assert fmt_float(float("inf")) is None
    assert fmt_float(123456789.123) == 123456789.0


def test_main_module_entry():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "ostroquad", *CHECK_26], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["holds"] is True
