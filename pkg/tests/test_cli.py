import json

import pytest

from stiefel_sections.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_verdict_human(capsys):
    code, out = run(capsys, "verdict", "--r", "2", "--l", "2", "--n", "8", "--char", "0")
    assert code == 0
    assert "NoSection" in out
    assert "SolverRun" in out


def test_verdict_json_roundtrips_and_verifies(capsys):
    code, out = run(capsys, "verdict", "--r", "3", "--l", "1", "--n", "28",
                    "--format", "json", "--verify")
    assert code == 0
    blob = json.loads(out)
    assert blob["status"] == "NecessaryConditionOnly"


def test_verdict_csv(capsys):
    code, out = run(capsys, "verdict", "--r", "2", "--l", "2", "--n", "8",
                    "--format", "csv")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header.startswith("r,l,n,char,status")
    assert row.startswith("2,2,8,0,NoSection")


def test_retract_certificate(capsys):
    code, out = run(capsys, "retract", "--n", "9", "--s", "7", "--t", "6",
                    "--k", "2", "--verify")
    assert code == 0
    assert "Impossible" in out and "mod" in out


def test_retract_witness_json(capsys):
    code, out = run(capsys, "retract", "--n", "27", "--s", "25", "--t", "24",
                    "--k", "2", "--format", "json", "--verify")
    assert code == 0
    blob = json.loads(out)
    assert blob["verdict"] == "exists"
    assert blob["witness"]


def test_adams_example(capsys):
    code, out = run(capsys, "adams", "--k", "2", "--n", "5", "--m", "3",
                    "--format", "json")
    assert code == 0
    assert json.loads(out)["entries"] == [[8, 0], [12, 16]]


def test_join_coeffs(capsys):
    code, out = run(capsys, "join-coeffs", "--r", "3", "--n", "6", "--m", "20")
    assert code == 0
    assert "all units" in out and "chase: passed" in out


def test_connectivity_replay(capsys):
    code, out = run(capsys, "connectivity", "--proof", "Prop5_7", "--r", "3", "--n", "9")
    assert code == 0
    assert "PASSED" in out and "= 11" in out


def test_sweep_writes_csv_and_png(tmp_path, capsys):
    out_csv = tmp_path / "sweep.csv"
    code, out = run(capsys, "sweep", "--r-min", "2", "--r-max", "4",
                    "--l-min", "2", "--l-max", "2", "--n-min", "6", "--n-max", "12",
                    "--out", str(out_csv), "--verify")
    assert code == 0
    assert out_csv.exists()
    png = tmp_path / "sweep.png"
    assert png.exists() and png.stat().st_size > 0
    lines = out_csv.read_text().strip().splitlines()
    assert lines[0] == "r,l,n,char,status,chain_length,certificate_ref"
    assert all(",NoSection," in line for line in lines[1:])


def test_invalid_arguments_exit_2(capsys):
    assert main(["verdict", "--r", "0", "--l", "1", "--n", "3"]) == 2
    assert main(["retract", "--n", "5", "--s", "2", "--t", "3", "--k", "2"]) == 2
    assert main(["connectivity", "--proof", "Nope", "--n", "5"]) == 2
    assert main(["nonsense"]) == 2
    capsys.readouterr()


@pytest.mark.parametrize("argv", [
    ["adams", "--k", "2", "--n", "5"],          # missing --m
    ["verdict", "--r", "2", "--l", "x", "--n", "8"],
    ["sweep", "--r-min", "2"],
])
def test_fuzzed_argument_vectors(argv, capsys):
    assert main(argv) == 2
    capsys.readouterr()
