import json

import pytest

from naba import cli, suites
from naba.errors import ConfigError


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_defaults_cover_every_suite():
    d = suites.load_defaults()
    assert set(d["suites"]) == set(suites.SUITES)
    assert d["seed"] == 1


def test_suite_params_validation():
    with pytest.raises(ConfigError) as exc:
        suites.suite_params("dwpf", {"nmax": "four"})
    assert exc.value.pointer == "/nmax"
    with pytest.raises(ConfigError):
        suites.suite_params("dwpf", {"bogus": 1})
    with pytest.raises(ConfigError):
        suites.suite_params("nope")


def test_failing_case_is_reported_not_raised():
    out = suites.run_case({"check": "det-rec", "v": ["1"], "u": ["1"], "c": "1"})
    assert out["pass"] is False and "PoleError" in out["error"]


@pytest.mark.parametrize("mode", ["exact", "float"])
def test_small_suites_pass(mode):
    for name, params in [("dwpf", {"nmax": 3, "trials": 3}), ("rtt", {"N": [3], "L": [2], "trials": 1})]:
        rep = suites.run_suite(name, params, seed=4, mode=mode)
        assert rep["summary"]["passed"] == rep["summary"]["total"] > 0


def test_seed_changes_draws_but_replays_exactly():
    a = suites.build_cases("dwpf", suites.suite_params("dwpf"), 1)
    b = suites.build_cases("dwpf", suites.suite_params("dwpf"), 1)
    c = suites.build_cases("dwpf", suites.suite_params("dwpf"), 2)
    assert a == b and a != c


def test_cli_verify_json_stdout(capsys):
    code, out, err = run_cli(["verify", "--suite", "dwpf", "--trials", "2", "--json", "-"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["summary"]["passed"] == rep["summary"]["total"]
    assert "wall_ms" not in rep["summary"]
    assert "dwpf:" in err


def test_cli_timing_flag(capsys):
    code, out, _ = run_cli(["verify", "--suite", "dwpf", "--trials", "1", "--timing", "--json", "-"], capsys)
    assert code == 0 and "wall_ms" in json.loads(out)["summary"]


def test_cli_dwpf_worked_value(capsys):
    code, out, _ = run_cli(["dwpf", "--c", "1", "--v", "0,1/2", "--u", "2,3"], capsys)
    assert code == 0
    assert json.loads(out) == {"value": "4/15", "method_agreement": True}


def test_cli_bad_chain_exit_code(tmp_path, capsys):
    cfg = tmp_path / "chain.json"
    cfg.write_text(json.dumps({"N": 3, "L": 0, "c": "1", "xi": []}))
    code, _, err = run_cli(["monodromy", "--config", str(cfg), "--u", "1/2"], capsys)
    assert code == 2
    assert "/L" in err


def test_cli_unknown_suite_and_missing_file(capsys):
    assert run_cli(["verify", "--suite", "nope"], capsys)[0] == 2
    assert run_cli(["bethe-vector", "--config", "/nonexistent.json", "--u", "1"], capsys)[0] == 2


def test_cli_bethe_vector_and_monodromy(tmp_path, capsys):
    cfg = tmp_path / "chain.json"
    cfg.write_text(json.dumps({"N": 3, "L": 2, "c": "1", "xi": ["0", "1/3"]}))
    code, out, _ = run_cli(["bethe-vector", "--config", str(cfg), "--u", "1/2", "--v", "7/3", "--method", "trace"],
                           capsys)
    assert code == 0
    entries = json.loads(out)["vector"]["entries"]
    assert entries[2] == "36/11" and entries[6] == "84/11"
    code, out, _ = run_cli(["monodromy", "--config", str(cfg), "--u", "2"], capsys)
    blocks = json.loads(out)["blocks"]
    assert code == 0 and len(blocks) == 3 and blocks[0][0]["shape"] == [3, 3]


def test_cli_solve_then_spectrum(tmp_path, capsys):
    cfg = tmp_path / "chain.json"
    cfg.write_text(json.dumps({"N": 3, "L": 2, "c": "1", "xi": ["0", "1/3"], "twist": ["1", "2", "3"]}))
    roots = tmp_path / "roots.json"
    code, _, _ = run_cli(["solve", "--config", str(cfg), "--a", "1", "--b", "1", "--starts", "16",
                          "--out", str(roots)], capsys)
    assert code == 0 and json.loads(roots.read_text())["roots"]
    code, out, _ = run_cli(["spectrum", "--config", str(cfg), "--roots", str(roots), "--compare-ed"], capsys)
    assert code == 0
    reports = json.loads(out)["reports"]
    assert reports and all(r["eig_error"] < 1e-10 for r in reports)


def test_cli_failure_exit_code(tmp_path, capsys):
    cfg = tmp_path / "chain.json"
    cfg.write_text(json.dumps({"N": 3, "L": 2, "c": "1", "xi": ["0", "1/3"], "twist": ["1", "2", "3"]}))
    roots = tmp_path / "roots.json"
    roots.write_text(json.dumps({"roots": [{"u": [[0.1, 0.0]], "v": [[0.9, 0.0]], "residual": 1.0}]}))
    code, _, _ = run_cli(["spectrum", "--config", str(cfg), "--roots", str(roots)], capsys)
    assert code == 1


def test_float_mode_run_all(capsys):
    code, out, _ = run_cli(["run-all", "--mode", "float", "--json", "-"], capsys)
    summary = json.loads(out)["summary"]
    assert code == 0 and summary["passed"] == summary["total"]


def test_tolerance_defaults_per_subcommand():
    assert cli.parse_args(["run-all"]).tol == 1e-10
    assert cli.parse_args(["solve", "--a", "1"]).tol == 1e-12
    assert cli.parse_args(["verify", "--suite", "rtt", "--tol", "1e-6"]).tol == 1e-6
