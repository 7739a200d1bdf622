import json
import subprocess
import sys
from pathlib import Path

import pytest

from secretgame.cli import EXIT_INVALID, EXIT_OK, EXIT_USAGE, main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
ALICE = {"family": "explicit-triple", "p_near": "0.99", "p_mid": "0.94", "p_far": "0.80"}
BOB = {"family": "explicit-triple", "p_near": "0.90", "p_mid": "0.84", "p_far": "0.70"}
SYM = {"family": "explicit-triple", "p_near": "0.9", "p_mid": "0.8", "p_far": "0.6"}


@pytest.fixture
def write_cfg(tmp_path):
    def _write(obj, name="cfg.json"):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestExitCodes:
    def test_validate_ok(self, capsys):
        code, out, _ = run(capsys, "validate", "--config", str(CONFIGS / "worked_example.json"))
        assert code == EXIT_OK
        assert json.loads(out)["ok"] is True

    def test_validate_names_violated_part(self, capsys, write_cfg):
        bad = dict(SYM, p_mid="0.7")
        code, out, _ = run(capsys, "validate", "--config", write_cfg({"N": 2, "alice": bad, "bob": BOB}))
        assert code == EXIT_INVALID
        assert "Assumption 1(iv)" in out

    def test_solve_invalid_triple(self, capsys, write_cfg):
        bad = dict(SYM, p_near="0.7")
        code, _, err = run(capsys, "solve", "--config", write_cfg({"N": 2, "alice": bad, "bob": BOB}))
        assert code == EXIT_INVALID
        assert "Assumption 1(iii)" in err

    def test_malformed_json(self, capsys, write_cfg):
        code, _, err = run(capsys, "solve", "--config", write_cfg('{"N": 2,, }'))
        assert code == EXIT_USAGE
        assert "line 1" in err

    @pytest.mark.parametrize("argv", [
        ["bogus"], ["solve"], ["solve", "--format", "xml"], [],
    ])
    def test_usage_errors(self, capsys, argv):
        assert run(capsys, *argv)[0] == EXIT_USAGE

    def test_odd_N(self, capsys, write_cfg):
        assert run(capsys, "solve", "--config", write_cfg({"N": 3, "alice": ALICE, "bob": BOB}))[0] == EXIT_USAGE

    def test_missing_field(self, capsys, write_cfg):
        code, _, err = run(capsys, "solve", "--config", write_cfg({"N": 2, "alice": ALICE}))
        assert code == EXIT_USAGE and "bob" in err


class TestSolve:
    def test_worked_example(self, capsys):
        code, out, _ = run(capsys, "solve", "--config", str(CONFIGS / "worked_example.json"))
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["class"] == "AsymmetricMixedOnly"
        assert data["mixed"]["q"] == ["0", "0.6", "0.4"]
        assert data["mixed"]["p"] == ["0", "15/29", "14/29"]
        assert data["value"] == "0.756"
        assert data["pure"] == []
        assert data["verification"]["ok"] is True

    def test_float_mode(self, capsys):
        code, out, _ = run(capsys, "solve", "--mode", "float", "--config", str(CONFIGS / "worked_example.json"))
        assert code == EXIT_OK
        assert abs(float(json.loads(out)["value"]) - 0.756) < 1e-12

    def test_float_mode_on_class_boundary(self, capsys, write_cfg):
        bob = {"p_near": "0.80", "p_mid": "0.74", "p_far": "0.55"}
        code, out, _ = run(capsys, "solve", "--mode", "float", "--config", write_cfg({"N": 2, "alice": ALICE, "bob": bob}))
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["class"] == "AsymmetricPureAtBob" and data["mixed"]["degenerate"]

    def test_symmetric(self, capsys, write_cfg):
        code, out, _ = run(capsys, "solve", "--config", write_cfg({"N": 2, "alice": SYM, "bob": SYM}))
        data = json.loads(out)
        assert data["class"] == "Symmetric"
        assert {"eve": "Middle", "legit": "Split"} in data["pure"]
        assert data["value"] == "0.64"

    def test_pure_at_bob(self, capsys):
        code, out, _ = run(capsys, "solve", "--config", str(CONFIGS / "pure_boundary_sweep.json"))
        data = json.loads(out)
        assert data["class"] == "AsymmetricPureAtBob"
        assert {"eve": "NearBob", "legit": "BobHeavy(0)"} in data["pure"]

    def test_quadratic_model(self, capsys):
        code, out, _ = run(capsys, "solve", "--config", str(CONFIGS / "quadratic.json"))
        assert code == EXIT_OK
        assert json.loads(out)["class"] == "Symmetric"

    def test_csv_and_out(self, capsys, tmp_path):
        dest = tmp_path / "solve.csv"
        code, out, _ = run(capsys, "solve", "--format", "csv", "--out", str(dest),
                           "--config", str(CONFIGS / "worked_example.json"))
        assert code == EXIT_OK and out == ""
        lines = dest.read_text().splitlines()
        assert lines[0].startswith("class,value")
        assert lines[1].startswith("AsymmetricMixedOnly,0.756")


class TestSimulate:
    def test_equilibrium_from_config(self, capsys):
        code, out, _ = run(capsys, "simulate", "--trials", "20000", "--config", str(CONFIGS / "worked_example.json"))
        rep = json.loads(out)
        assert code == EXIT_OK
        assert rep["analytic_pe"] == "0.756" and rep["seed"] == 2024
        assert abs(float(rep["z_score"])) <= 4

    def test_overrides_and_partitions(self, capsys):
        argv = ["simulate", "--legit", "Split", "--eve", "NearAlice", "--trials", "5000", "--seed", "3",
                "--config", str(CONFIGS / "worked_example.json")]
        _, seq, _ = run(capsys, *argv)
        _, par, _ = run(capsys, *argv, "--partitions", "8")
        assert seq == par
        assert json.loads(seq)["analytic_pe"] == "0.693"

    def test_bad_label(self, capsys):
        code, _, _ = run(capsys, "simulate", "--legit", "AliceHeavy(5)", "--eve", "Middle",
                         "--config", str(CONFIGS / "worked_example.json"))
        assert code == EXIT_INVALID

    def test_zero_trials(self, capsys):
        code, _, _ = run(capsys, "simulate", "--trials", "0", "--config", str(CONFIGS / "worked_example.json"))
        assert code == EXIT_INVALID


class TestSweep:
    def test_pure_regime_boundary(self, capsys):
        code, out, err = run(capsys, "sweep", "--config", str(CONFIGS / "pure_boundary_sweep.json"))
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0].split(",")[:5] == ["index", "param", "value", "valid", "class"]
        assert len(lines) == 22
        assert "class boundary between 0.8 and 0.81: AsymmetricPureAtBob -> AsymmetricMixedOnly" in err

    def test_json_boundaries(self, capsys):
        _, out, _ = run(capsys, "sweep", "--format", "json", "--config", str(CONFIGS / "pure_boundary_sweep.json"))
        data = json.loads(out)
        assert data["boundaries"] == [{"after": "0.8", "at": "0.81", "from": "AsymmetricPureAtBob",
                                       "to": "AsymmetricMixedOnly"}]

    def test_single_point(self, capsys):
        code, out, _ = run(capsys, "sweep", "--start", "0.8", "--stop", "0.8",
                           "--config", str(CONFIGS / "pure_boundary_sweep.json"))
        assert code == EXIT_OK and len(out.splitlines()) == 2

    def test_symmetry_crossing(self, capsys, write_cfg):
        cfg = {"N": 2, "alice": SYM, "bob": dict(SYM, p_near="0.89"),
               "sweep": {"param": "bob.p_near", "start": "0.89", "stop": "0.9", "step": "0.01"}}
        _, out, _ = run(capsys, "sweep", "--format", "json", "--config", write_cfg(cfg))
        rows = json.loads(out)["rows"]
        # equal p_mid: no strict dominance either way until the triples coincide
        assert [r["class"] for r in rows] == ["Unclassified", "Symmetric"]
        assert rows[1]["class_change"] and rows[1]["game_value"] == "0.64"

    def test_invalid_row_exits_1(self, capsys):
        code, out, _ = run(capsys, "sweep", "--format", "json", "--start", "0.68", "--stop", "0.70",
                           "--config", str(CONFIGS / "pure_boundary_sweep.json"))
        rows = json.loads(out)["rows"]
        assert code == EXIT_INVALID
        assert [r["valid"] for r in rows] == [False, False, True]

    def test_bad_param(self, capsys):
        code, _, _ = run(capsys, "sweep", "--param", "eve.p_near", "--config", str(CONFIGS / "pure_boundary_sweep.json"))
        assert code == EXIT_USAGE


def test_repro(capsys):
    code, out, _ = run(capsys, "repro-paper-example")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["value"] == data["lp_value"] == data["support_enumeration_value"] == "0.756"
    assert data["q"] == ["0", "0.6", "0.4"] and data["q_matches_published"]
    assert all(row["match"] for row in data["eve_coefficients"])
    mism = {r["strategy"]: r["mismatched_terms"] for r in data["legit_coefficients"]}
    assert mism == {"AliceHeavy(0)": [1], "Split": [1], "BobHeavy(0)": []}
    rec, pub = data["p_candidates"]
    assert rec["verification"]["ok"] and not pub["verification"]["ok"]
    assert pub["derived_from_published_coefficients"] == "25/43"
    assert data["full_support_proposition"]["q_approx"] == [1.946, -3.292, 2.346]


def test_solve_then_simulate_round_trip(capsys, write_cfg):
    _, out, _ = run(capsys, "solve", "--config", str(CONFIGS / "worked_example.json"))
    mixed = json.loads(out)["mixed"]
    cfg = {"N": 2, "alice": ALICE, "bob": BOB,
           "simulate": {"legit": mixed["q"], "eve": mixed["p"], "trials": 50000, "seed": 11}}
    code, out, _ = run(capsys, "simulate", "--config", write_cfg(cfg))
    rep = json.loads(out)
    assert code == EXIT_OK and rep["analytic_pe"] == "0.756"
    assert abs(float(rep["z_score"])) <= 4


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "secretgame", "repro-paper-example", "--format", "csv"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1] == "NearAlice,0.9801,0.693,0.49"
