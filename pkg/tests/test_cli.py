import json
import subprocess
import sys

import pytest

from makai.cli import main, parse_n_range, validation_suite
from makai.errors import InputError
from makai.geometry import unit_square


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_certify_json(capsys):
    code, out, _ = run_cli(capsys, "certify", "--n-range", "2..4")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and [c["n"] for c in doc["certificates"]] == [2, 3, 4]


def test_verify_square_from_file(tmp_path, capsys):
    path = tmp_path / "square.json"
    path.write_text(json.dumps(unit_square().to_json()))
    code, out, _ = run_cli(capsys, "verify", "--input", str(path))
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["passed"] and rep["n"] == 2


def test_verify_family_csv(capsys):
    code, out, _ = run_cli(capsys, "verify", "--family", "tangential_random", "--dim", "2",
                           "--seed", "4", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "name,lhs,rhs,margin,tol,pass,certain"
    assert any(line.startswith("makai,") for line in lines)


def test_profile_csv_writes_chain_sidecar(tmp_path, capsys):
    out = tmp_path / "prof.csv"
    code, _, _ = run_cli(capsys, "profile", "--family", "random_hull", "--dim", "2", "--seed", "9",
                         "--grid-m", "32", "--format", "csv", "--out", str(out))
    assert code == 0
    assert out.read_text().splitlines()[0] == "t,mu,per,L,lambda"
    chain = json.loads((tmp_path / "prof.chain.json").read_text())
    assert all(c["pass"] for c in chain["chain"].values())


def test_analytic_sweep_high_dimension(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--family", "cone", "--dim", "5", "--k", "10,100,1000")
    doc = json.loads(out)["sweep"]
    assert code == 0
    assert doc["trends"]["alpha_decreasing"]


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "--family", "random_hull", "--dim", "3", "--seed", "17"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [
    ["verify"],
    ["verify", "--family", "cone"],
    ["certify", "--n-range", "1..3"],
    ["sweep", "--family", "box", "--dim", "3"],
    ["verify", "--input", "/nonexistent/body.json"],
    ["verify", "--family", "cone", "--dim", "2", "--k", "-3"],
])
def test_input_errors_exit_two(argv, capsys):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2
    assert "error" in json.loads(err.strip().splitlines()[-1])


def test_usage_error_is_json():
    proc = subprocess.run([sys.executable, "-m", "makai", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert json.loads(proc.stderr)["error"] == "UsageError"


def test_n_range_parser():
    assert parse_n_range("2..5") == [2, 3, 4, 5]
    assert parse_n_range("7") == [7]
    with pytest.raises(InputError):
        parse_n_range("5..2")


def test_validation_suite_all_pass():
    results = validation_suite()
    assert all(r["pass"] for r in results), [r for r in results if not r["pass"]]
