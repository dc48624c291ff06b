import json

import pytest

from hilbmac.cli import RunConfig, dispatch


def run_cli(capsys, argv):
    code = dispatch(argv)
    out = capsys.readouterr().out
    return code, out


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        dispatch(["frobnicate"])
    assert exc.value.code == 2


def test_malformed_flags_exit_2():
    with pytest.raises(SystemExit) as exc:
        dispatch(["correlate", "--word", "E1", "--order", "not-a-number"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        dispatch(["chi", "--insert", "nonsense"])
    assert exc.value.code == 2


def test_runconfig_invariants():
    with pytest.raises(ValueError):
        RunConfig(order=-1)
    with pytest.raises(ValueError):
        RunConfig(trials=0)
    with pytest.raises(ValueError):
        RunConfig(mode="wild")
    assert RunConfig(order=6).resolve_mode() == "evaluate"
    assert RunConfig(order=4).resolve_mode() == "symbolic"


def test_correlate_json_schema(capsys):
    code, out = run_cli(capsys, ["correlate", "--word", "E1", "--order", "3",
                                 "--normalized"])
    assert code == 0
    data = json.loads(out)
    assert data["word"] == "E1"
    assert data["order"] == 3
    assert [row["power"] for row in data["series"]] == [0, 1, 2, 3]
    assert "closed-form:E1" in data["verified_against"]
    assert "vertex-engine" in data["verified_against"]


def test_correlate_evaluate_mode_reports_bindings(capsys):
    code, out = run_cli(capsys, ["correlate", "--word", "E1,E1", "--order", "6",
                                 "--normalized", "--seed", "7"])
    assert code == 0
    data = json.loads(out)
    assert data["mode"] == "evaluate"
    assert set(data["bindings"]) == {"q", "t", "u", "v"}
    assert "closed-form:E1E1" in data["verified_against"]


def test_determinism_byte_identical(capsys):
    args = ["correlate", "--word", "Psi1", "--order", "6", "--normalized",
            "--seed", "3"]
    _, out1 = run_cli(capsys, args)
    _, out2 = run_cli(capsys, args)
    assert out1 == out2


def test_verify_main_pass_and_output(capsys):
    code, out = run_cli(capsys, ["verify", "main", "--A", "1,0", "--order", "4",
                                 "--mode", "evaluate", "--seed", "2"])
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "PASS"
    assert data["A"] == [1, 0]


def test_verify_main_symbolic(capsys):
    code, out = run_cli(capsys, ["verify", "main", "--A", "0,0", "--order", "3",
                                 "--mode", "symbolic"])
    assert code == 0
    assert json.loads(out)["verdict"] == "PASS"


def test_toric_check_single(capsys):
    code, out = run_cli(capsys, ["toric-check", "--surface", "P2", "--which",
                                 "lambda1", "--order", "2", "--seed", "5"])
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "PASS"
    assert all(r["check"] == "lambda1" for r in data["results"])


def test_macdonald_subcommands(capsys):
    code, out = run_cli(capsys, ["macdonald", "P", "--mu", "2"])
    assert code == 0
    data = json.loads(out)
    parts = {tuple(row["partition"]): row["coeff"] for row in data["terms"]}
    assert parts[(2,)] == "1"
    code, out = run_cli(capsys, ["macdonald", "norm", "--mu", "1"])
    assert json.loads(out)["b_norm"] == "(-1 + t)/(-1 + q)" or \
        json.loads(out)["b_norm"] == "(1 - t)/(1 - q)"
    code, out = run_cli(capsys, ["macdonald", "eigen", "--mu", "1", "--r", "1"])
    assert code == 0


def test_symfun_subcommands(capsys):
    code, out = run_cli(capsys, ["symfun", "alpha", "--degree", "3"])
    assert code == 0
    data = json.loads(out)
    table = {tuple(row["partition"]): row["coeff"] for row in data["terms"]}
    assert table[(1, 1)] == "-1/2"
    code, out = run_cli(capsys, ["symfun", "betagamma", "--degree", "2"])
    assert code == 0
    payload = json.loads(out)
    assert {tuple(r["partition"]) for r in payload["beta"]} == {(1,), (2,), (1, 1)}
    inp = json.dumps({"basis": "h", "terms": [{"partition": [2], "coeff": "1"}]})
    code, out = run_cli(capsys, ["symfun", "convert", "--to", "p", "--input", inp])
    data = json.loads(out)
    got = {tuple(r["partition"]): r["coeff"] for r in data["terms"]}
    assert got == {(1, 1): "1/2", (2,): "1/2"}


def test_chi_subcommand_schema(capsys):
    code, out = run_cli(capsys, ["chi", "--surface", "C2", "--insert", "psi:2:1,0",
                                 "--twist", "0,0", "--order", "2",
                                 "--mode", "evaluate", "--seed", "9"])
    assert code == 0
    data = json.loads(out)
    assert data["surface"] == {"name": "C2", "twist": [0, 0]}
    assert data["insertions"] == ["psi:2:1,0"]
    assert len(data["series"]) == 3


def test_verify_all_subset(capsys):
    code, out = run_cli(capsys, ["verify-all", "--only", "C13,C14", "--seed", "1",
                                 "--format", "plain"])
    assert code == 0
    assert "PASS C13" in out
    assert "PASS C14" in out


def test_verify_all_jobs_deterministic(capsys):
    base = ["verify-all", "--only", "C13,C14", "--seed", "1", "--format", "plain"]
    _, out1 = run_cli(capsys, base)
    _, out2 = run_cli(capsys, base + ["--jobs", "2"])
    assert out1 == out2


def test_csv_output_format(capsys):
    code, out = run_cli(capsys, ["correlate", "--word", "E1", "--order", "2",
                                 "--normalized", "--format", "csv"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "coeff,power"
    assert len(lines) == 4


def test_plain_output_format(capsys):
    code, out = run_cli(capsys, ["macdonald", "norm", "--mu", "2",
                                 "--format", "plain"])
    assert code == 0
    assert out.startswith("b_norm:") or "b_norm" in out


def test_cross_process_byte_determinism():
    import subprocess
    import sys
    args = [sys.executable, "-m", "hilbmac", "correlate", "--word", "E2",
            "--order", "6", "--normalized", "--seed", "13"]
    runs = [subprocess.run(args, capture_output=True, text=True,
                           env={"PYTHONHASHSEED": str(seed), "PATH": "/usr/bin:/bin"})
            for seed in (0, 42)]
    assert runs[0].returncode == 0, runs[0].stderr
    assert runs[0].stdout == runs[1].stdout
    assert runs[0].stdout


def test_verify_all_unknown_criterion_rejected():
    with pytest.raises(SystemExit) as exc:
        dispatch(["verify-all", "--only", "C99"])
    assert "unknown criterion" in str(exc.value)
