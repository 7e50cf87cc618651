"""End-to-end command line runs over the problem corpus, in process."""

import json
from pathlib import Path

import pytest

from dulac import cli
from dulac.mseries import Lemma6Report

from .util import DATA


def run(tmp_path, *argv, outdir="out"):
    out = tmp_path / outdir
    code = cli.main([*argv, "--output-dir", str(out)])
    return code, out


def read(out: Path, name: str) -> str:
    # read_text would translate the CSV line endings; keep the exact bytes
    return (out / name).read_bytes().decode("utf-8")


def payload(out: Path, name: str) -> dict:
    return json.loads(read(out, name))


# -- solve -----------------------------------------------------------------


def test_solve_euler(tmp_path):
    code, out = run(tmp_path, "solve", str(DATA / "euler.json"))
    assert code == 0
    data = payload(out, "solution.json")
    assert data["command"] == "solve"
    assert len(data["solution"]["terms"]) == 25
    assert data["solution"]["terms"][4] == {"exp": ["5/1"], "poly": ["24/1"]}
    csv_text = read(out, "terms.csv")
    lines = csv_text.split("\r\n")
    assert lines[0] == "k,exp,re_lambda,im_lambda,deg_c,poly"
    assert lines[1] == "1,1/1,1,0,0,1/1"
    assert len(lines) == 27  # header + 25 + trailing
    assert csv_text.count("\n") == csv_text.count("\r\n")


def test_solve_cutoff_flag_overrides(tmp_path):
    code, out = run(tmp_path, "solve", str(DATA / "euler.json"), "--cutoff", "5")
    assert code == 0
    assert len(payload(out, "solution.json")["solution"]["terms"]) == 4


def test_solve_log_prefix_cases(tmp_path, capsys):
    for name in ("resonant_logprefix.json", "resonant_double.json"):
        code, out = run(tmp_path, "solve", str(DATA / name), outdir=name)
        assert code == 0
        data = payload(out, "solution.json")
        assert data["residual"]["terms"] == []
        assert "residual valuation: inf" in capsys.readouterr().out


def test_solve_resonance_exits_3(tmp_path, capsys):
    code, _ = run(tmp_path, "solve", str(DATA / "resonant.json"))
    assert code == 3
    err = capsys.readouterr().err
    assert err.startswith("error: ")
    assert "lambda = (1)" in err


def test_solve_hypothesis_violation_exits_2(tmp_path, capsys):
    code, _ = run(tmp_path, "solve", str(DATA / "hypoviol.json"))
    assert code == 2
    assert "nonconstant polynomial" in capsys.readouterr().err


def test_solve_degenerate_top_derivative_exits_2(tmp_path, capsys):
    code, _ = run(tmp_path, "solve", str(DATA / "degenerate.json"))
    assert code == 2
    assert "dF/dy_2" in capsys.readouterr().err


def test_solve_undecidable_exits_4(tmp_path, capsys):
    code, _ = run(tmp_path, "solve", str(DATA / "undecidable.json"))
    assert code == 4
    assert "precision" in capsys.readouterr().err


def test_schema_error_exits_5(tmp_path, capsys):
    code, _ = run(tmp_path, "solve", str(DATA / "bad_schema.json"))
    assert code == 5
    assert "ode" in capsys.readouterr().err
    code2, _ = run(tmp_path, "solve", str(DATA / "no_such_file.json"))
    assert code2 == 5


def test_bad_precision_flag_exits_5(tmp_path):
    assert run(tmp_path, "solve", str(DATA / "euler.json"), "--precision", "32")[0] == 5
    assert run(tmp_path, "solve", str(DATA / "euler.json"), "--precision", "2048")[0] == 5


def test_bad_R_flag_exits_5(tmp_path):
    assert run(tmp_path, "verify", str(DATA / "euler.json"), "--R", "1")[0] == 5


# -- analyze ------------------------------------------------------------------


def test_analyze_euler(tmp_path):
    code, out = run(tmp_path, "analyze", str(DATA / "euler.json"))
    assert code == 0
    data = payload(out, "analysis.json")
    assert data["s"] == "1"
    assert data["linearization"]["ell"] == 0
    assert data["linearization"]["A"] == ["-1/1", "0/1"]
    assert data["linearization"]["nu"] == ["0/1"]
    assert data["conditions"]["minimal_m"] is None  # single prefix term, gap fails
    assert data["conditions"]["roots_ok"] is True


def test_analyze_no_prefix_has_null_conditions(tmp_path):
    code, out = run(tmp_path, "analyze", str(DATA / "resonant.json"))
    assert code == 0
    data = payload(out, "analysis.json")
    assert data["conditions"] is None
    assert data["s"] == "inf"  # top derivative participates in the leading data


# -- verify ----------------------------------------------------------------------


def test_verify_euler(tmp_path):
    code, out = run(tmp_path, "verify", str(DATA / "euler.json"))
    assert code == 0
    data = payload(out, "gevrey.json")
    assert data["verdict"] == "GevreyBounded"
    assert data["s"] == "1"
    assert abs(data["A_fit"] - 1) < 1e-9
    assert all(abs(row["rho"] - 1) < 1e-9 for row in data["rows"])
    text = read(out, "gevrey.csv")
    assert text.startswith("k,re_lambda,im_lambda,deg_c,norm_R,gamma_abs,rho,envelope_Ck\r\n")


def test_verify_convergent(tmp_path):
    code, out = run(tmp_path, "verify", str(DATA / "convergent.json"))
    assert code == 0
    data = payload(out, "gevrey.json")
    assert data["verdict"] == "ConvergentCandidate"
    assert data["s"] == "inf"
    assert abs(data["radius_estimate"] - 1.0) < 1e-9


# -- reduce ------------------------------------------------------------------------


def test_reduce_with_prefix_uses_prefix_length(tmp_path, capsys):
    code, out = run(tmp_path, "reduce", str(DATA / "euler.json"))
    assert code == 0
    data = payload(out, "reduced.json")
    assert data["m"] == 1
    assert data["violations"]  # gap condition fails at m = 1
    assert "violations:" in capsys.readouterr().out


def test_reduce_without_prefix_picks_minimal_m(tmp_path):
    code, out = run(tmp_path, "reduce", str(DATA / "convergent.json"))
    assert code == 0
    data = payload(out, "reduced.json")
    assert data["m"] == 2
    assert data["violations"] == []


# -- iota --------------------------------------------------------------------------


def test_iota_euler(tmp_path):
    code, out = run(tmp_path, "iota", str(DATA / "euler_gens.json"))
    assert code == 0
    data = payload(out, "mseries.json")
    assert data["m"] == 1
    assert data["lambda_base"] == ["1/1"]
    assert data["round_trip_exact"] is True
    assert data["K_fit"] == "0"
    assert data["gaps"][0] == {"k": 2, "gap": ["1/1"], "m": [1]}
    assert len(data["mseries"]["terms"]) == 8  # k = 2..9 below cutoff 10


def test_iota_requires_generators(tmp_path, capsys):
    code, _ = run(tmp_path, "iota", str(DATA / "euler.json"))
    assert code == 5
    assert "generators" in capsys.readouterr().err


def test_iota_gap_outside_generators_exits_2(tmp_path, capsys):
    src = json.loads((DATA / "euler_gens.json").read_text(encoding="utf-8"))
    src["generators"] = [["2/1"]]
    bad = tmp_path / "bad_gens.json"
    bad.write_text(json.dumps(src), encoding="utf-8")
    code, _ = run(tmp_path, "iota", str(bad))
    assert code == 2
    assert "does not decompose" in capsys.readouterr().err


# -- check-norms ----------------------------------------------------------------------


def test_check_norms_passes(tmp_path):
    code, out = run(tmp_path, "check-norms", str(DATA / "euler.json"), "--seed", "3")
    assert code == 0
    data = payload(out, "normcheck.json")
    assert data["all_pass"] is True
    assert data["lemma6"] == {"trials": 40, "failures": 0}
    assert data["lemma5"] == {"trials": 25, "failures": 0}
    assert data["lemma5_rejects"] == {"trials": 8, "failures": 0}
    assert data["majorant_monotone"] == {"trials": 5, "failures": 0}
    assert data["seed"] == 3


def test_check_norms_regression_exits_1(tmp_path, monkeypatch):
    def broken(g1, g2, p):
        return Lemma6Report(lhs=1, rhs=0, C_used=1, passed=False, splits=1)

    monkeypatch.setattr(cli, "check_lemma6", broken)
    code, out = run(tmp_path, "check-norms", str(DATA / "euler.json"))
    assert code == 1
    assert payload(out, "normcheck.json")["all_pass"] is False


# -- suggest-generators ------------------------------------------------------------------


def test_suggest_generators(tmp_path):
    code, out = run(tmp_path, "suggest-generators", str(DATA / "euler.json"))
    assert code == 0
    data = payload(out, "generators.json")
    assert data["suggested"] == [["1/1"]]
    assert "heuristic" in data["note"]


# -- output shape and determinism -------------------------------------------------------


def test_format_json_echoes_artifact(tmp_path, capsys):
    code, out = run(tmp_path, "analyze", str(DATA / "euler.json"), "--format", "json")
    assert code == 0
    assert capsys.readouterr().out == read(out, "analysis.json")


def test_format_csv_echoes_csv_artifact(tmp_path, capsys):
    code, out = run(tmp_path, "solve", str(DATA / "euler.json"), "--format", "csv")
    assert code == 0
    assert capsys.readouterr().out == read(out, "terms.csv")


def test_artifacts_deterministic(tmp_path):
    pairs = [
        ("solve", "euler.json", ["solution.json", "terms.csv"]),
        ("verify", "convergent.json", ["gevrey.json", "gevrey.csv"]),
        ("check-norms", "euler.json", ["normcheck.json"]),
    ]
    for cmd, src, names in pairs:
        _, out1 = run(tmp_path, cmd, str(DATA / src), "--seed", "11", outdir=f"a-{cmd}")
        _, out2 = run(tmp_path, cmd, str(DATA / src), "--seed", "11", outdir=f"b-{cmd}")
        for name in names:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_json_artifacts_sorted_and_newline_terminated(tmp_path):
    _, out = run(tmp_path, "analyze", str(DATA / "euler.json"))
    text = read(out, "analysis.json")
    assert text.endswith("\n") and not text.endswith("\n\n")
    data = json.loads(text)
    assert text == json.dumps(data, sort_keys=True, indent=2) + "\n"
