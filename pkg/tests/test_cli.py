import json

import pytest

from ncsolenoid.cli import main
from ncsolenoid.exact import SplitScalar
from ncsolenoid.solenoid import pi_map
from fractions import Fraction as F


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def _fields(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


def test_compute_beta_default(capsys):
    code, out, _ = run(capsys, "compute-beta")
    assert code == 0
    info = _fields(out)
    assert info["beta"] == "(3, 2/5)" and info["mode"] == "strict"


def test_compute_beta_identity(capsys):
    code, out, _ = run(capsys, "compute-beta", "--matrix", "1,0;0,1")
    assert _fields(out)["beta"] == "(1/3, 5/2)"


def test_compute_beta_report_mode(capsys):
    code, out, _ = run(capsys, "compute-beta", "--matrix", "1,1;3,4", "--alpha-t", "1/5")
    assert code == 0
    assert _fields(out)["mode"] == "report"


def test_compute_beta_singular(capsys):
    code, _, err = run(capsys, "compute-beta", "--matrix", "1,1;3,4")
    assert code == 2 and "SingularAt" in err


@pytest.mark.parametrize("args", [["--p", "4"], ["--matrix", "1,2"], ["--alpha-t", "x"], ["--level", "-1"],
                                  ["--matrix", "1/3,0;0,1"]])
def test_input_errors(capsys, args):
    code, _, err = run(capsys, "compute-beta", *args)
    assert code == 2 and err.startswith("error:")


def test_strict_only_gate(capsys):
    code, _, err = run(capsys, "verify", "--matrix", "1,1;3,4", "--alpha-t", "1/5", "--strict-only")
    assert code == 2 and "NotStrict" in err


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "0,0,0")
    assert code == 0 and out.strip() == "q: (0, 0)"
    z = pi_map(SplitScalar(F(1, 3), F(5, 2)), 6, 2)
    code, out, _ = run(capsys, "orbit", z.literal())
    t, r = out.strip()[4:-1].split(", ")
    assert pi_map(SplitScalar(F(t), F(r)), 6, 2) == z
    code, _, err = run(capsys, "orbit", "1/3,1/2")
    assert code == 2 and "IncoherentPoint" in err


def test_env_override(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("NCSOLENOID_SAMPLES", "7")
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "moebius", "--out", str(out))
    assert code == 0
    assert json.loads(out.read_text())["config"]["samples"] == 7
    code, _, _ = run(capsys, "verify", "moebius", "--samples", "5", "--out", str(out))
    assert json.loads(out.read_text())["config"]["samples"] == 5


def test_report_schema_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, _, _ = run(capsys, "verify", "bibundle", "--samples", "40", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert set(rep) == {"run_id", "config", "suites", "timing_ms"}
    assert rep["timing_ms"] is None
    for s in rep["suites"]:
        assert set(s) == {"name", "checks"}
        for c in s["checks"]:
            assert {"id", "status", "samples", "counterexample", "defect_phase"} <= set(c)


def test_timing_flag(capsys, tmp_path):
    out = tmp_path / "t.json"
    run(capsys, "verify", "moebius", "--samples", "5", "--timing", "--out", str(out))
    assert "moebius" in json.loads(out.read_text())["timing_ms"]


def test_non_strict_verify_reports_defects(capsys):
    code, out, _ = run(capsys, "verify", "bibundle", "--matrix", "1,1;3,4", "--alpha-t", "1/5", "--samples", "30")
    assert code == 0
    assert "DEFECT" in out


def test_translation_route(capsys):
    code, out, _ = run(capsys, "verify", "bibundle", "--matrix", "2,1;0,1/2", "--samples", "20")
    assert code == 0 and "translation[" in out


def test_bimodule_skipped_for_non_strict(capsys):
    code, out, _ = run(capsys, "verify", "bimodule", "--matrix", "1,1;3,4", "--alpha-t", "1/5", "--samples", "10")
    assert code == 0 and "SKIPPED" in out


def test_float_mode_runs(capsys):
    code, _, _ = run(capsys, "verify", "algebra", "--mode", "float", "--samples", "5")
    assert code == 0


def test_default_all_exits_zero(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "fail=0" in out
