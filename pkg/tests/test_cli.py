"""End-to-end checks of the eaqc command line."""

import json
import subprocess
import sys

import numpy as np
import pytest

from eaqc.cli import main
from eaqc.eacode import build_theorem5
from eaqc.gf2 import ModelMatrix, expand, gfrank, matmul
from eaqc.harness import CSV_COLUMNS


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_params_nine(capsys):
    doc = run_json(capsys, "params", "--family", "thm5",
                   "--p", "3", "--l1", "1", "--l2", "1")
    assert doc == {
        "family": "theorem5", "n": 9, "k": 4, "c": 1,
        "gfrank_hx": 3, "gfrank_hz": 3, "girth_floor": 8,
    }


def test_params_thm8(capsys):
    doc = run_json(capsys, "params", "--family", "thm8", "--l", "6", "--w", "2")
    assert (doc["n"], doc["k"], doc["c"]) == (390, 132, 128)
    assert doc["gfrank_hx"] == 193


def test_params_thm9_reduced(capsys):
    doc = run_json(capsys, "params", "--family", "thm9",
                   "--set", "2,4,6", "--w", "2", "--reduced")
    assert (doc["n"], doc["k"], doc["c"]) == (381, 2, 379)


def test_construct_round_trips_the_code(capsys):
    doc = run_json(capsys, "construct", "--family", "thm5",
                   "--p", "3", "--l1", "1", "--l2", "1")
    code = build_theorem5(3, 1, 1)
    hex_bits = np.array([[int(ch) for ch in row] for row in doc["hex"]], np.uint8)
    hez_bits = np.array([[int(ch) for ch in row] for row in doc["hez"]], np.uint8)
    assert np.array_equal(hex_bits, code.hex.to_dense())
    assert np.array_equal(hez_bits, code.hez.to_dense())
    mx = ModelMatrix.from_json_dict(doc["mx"])
    assert np.array_equal(expand(mx).to_dense(), code.hx.to_dense())


def test_construct_commutation_holds(capsys):
    doc = run_json(capsys, "construct", "--family", "thm6",
                   "--p", "7", "--l1", "3", "--l2", "3")
    hex_bits = np.array([[int(c) for c in r] for r in doc["hex"]], np.uint8)
    hez_bits = np.array([[int(c) for c in r] for r in doc["hez"]], np.uint8)
    from eaqc.gf2 import BinaryMatrix
    prod = matmul(BinaryMatrix.from_dense(hex_bits),
                  BinaryMatrix.from_dense(hez_bits).transpose())
    assert gfrank(prod) == 0


def test_girth_agrees_and_exits_zero(capsys):
    code, out, _ = run_cli(capsys, "girth", "--family", "thm7",
                           "--p", "11", "--l", "5")
    assert code == 0
    doc = json.loads(out)
    assert doc["girth_floor"] == 6
    assert doc["bfs_girth"] == 6


def test_girth_thm9_reduced_above_six(capsys):
    code, out, _ = run_cli(capsys, "girth", "--family", "thm9",
                           "--set", "2,4,6", "--w", "2", "--reduced")
    assert code == 0
    doc = json.loads(out)
    assert doc["girth_floor"] == 8
    assert doc["bfs_girth"] is None or doc["bfs_girth"] >= 8


def test_transversal_reports_preserved(capsys):
    doc = run_json(capsys, "transversal", "--p", "3")
    assert doc["preserved"] == {
        "hadamard_swap": True, "s_cz": True, "h_s_cz": True,
    }
    act = doc["logical_action"]["hadamard_swap"]
    assert set(act) == {"X1", "Z1", "X2", "Z2", "X3", "Z3", "X4", "Z4"}
    # the swap layer exchanges the X and Z sectors
    for key, labels in act.items():
        want = "Z" if key.startswith("X") else "X"
        assert labels and all(lab.startswith(want) for lab in labels)


def test_simulate_emits_result_fields(capsys):
    doc = run_json(capsys, "simulate", "--family", "thm5",
                   "--p", "3", "--l1", "1", "--l2", "1",
                   "--pd", "0.03", "--trials", "50", "--seed", "11",
                   "--decoder", "quat")
    assert doc["decoder"] == "quaternary-spa"
    assert doc["trials"] == 50
    assert 0.0 <= doc["ci_low"] <= doc["LER"] <= doc["ci_high"] <= 1.0
    assert doc["seed"] == 11


def test_simulate_deterministic(capsys):
    argv = ("simulate", "--family", "thm5", "--p", "3", "--l1", "1",
            "--l2", "1", "--pd", "0.04", "--trials", "40", "--seed", "3")
    assert run_json(capsys, *argv) == run_json(capsys, *argv)


def test_sweep_csv_shape(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--family", "thm5", "--p", "3", "--l1", "1",
        "--l2", "1", "--pd", "0.02,0.04", "--eta", "0.0,0.5",
        "--trials", "30", "--seed", "5", "--decoder", "binary")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 5
    first = lines[1].split(",")
    assert first[0] == "theorem5"
    assert first[4] == "0.02" and first[5] == "0.0"
    assert first[6] == "binary-spa"


def test_sweep_writes_file(tmp_path, capsys):
    target = tmp_path / "rows.csv"
    code, _, _ = run_cli(
        capsys, "sweep", "--family", "thm5", "--p", "3", "--l1", "1",
        "--l2", "1", "--pd", "0.03", "--eta", "0.0", "--trials", "20",
        "--seed", "2", "--out", str(target))
    assert code == 0
    text = target.read_text()
    assert text.startswith(",".join(CSV_COLUMNS))


def test_burst_check_reports_fractions(capsys):
    doc = run_json(capsys, "burst-check", "--family", "thm5",
                   "--p", "3", "--l1", "1", "--l2", "1", "--length", "3")
    assert doc["windows"] == 7
    assert doc["patterns"] == 351
    assert doc["oracle_corrected"] == 51
    assert doc["spa_corrected"] == 9
    assert doc["oracle_failures"]
    assert doc["oracle_fraction"] == pytest.approx(51 / 351)


def test_burst_check_refuses_large_enumerations(capsys):
    code, _, err = run_cli(capsys, "burst-check", "--family", "thm5",
                           "--p", "5", "--l1", "2", "--l2", "2",
                           "--length", "10")
    assert code == 1
    assert "verification failure" in err


def test_missing_family_flags_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["params", "--family", "thm7", "--p", "11"])
    assert exc.value.code == 2
    assert "--l" in capsys.readouterr().err


def test_invalid_prime_exits_two(capsys):
    code, _, err = run_cli(capsys, "params", "--family", "thm5",
                           "--p", "9", "--l1", "1", "--l2", "1")
    assert code == 2
    assert "prime" in err


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "eaqc.cli", "params", "--family", "thm5",
         "--p", "3", "--l1", "1", "--l2", "1"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 9
