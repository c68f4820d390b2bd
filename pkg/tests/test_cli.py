import json

import numpy as np
import pytest

from fracorlicz.cli import main, parse_s, parse_young
from fracorlicz.young import Exponential, Power, PowerLog


def _run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_parse_young():
    assert isinstance(parse_young("power:p=5"), Power)
    A = parse_young("exp:gamma0=-1,gamma=1")
    assert isinstance(A, Exponential) and A.gamma == 1.0
    B = parse_young('{"kind": "power_log", "p0": 2, "alpha0": 0, "p": 3, "alpha": 1}')
    assert isinstance(B, PowerLog)
    with pytest.raises(ValueError):
        parse_young("nonsense:p=1")


def test_parse_s_accepts_fractions():
    assert float(parse_s("3/2")) == 1.5
    assert parse_s("0.5") == 0.5


@pytest.mark.parametrize("argv,code", [
    (["classify", "--young", "power:p=5", "--n", "2", "--s", "0.5"], 0),
    (["classify", "--young", "power:p=2", "--n", "2", "--s", "0.5"], 2),
    (["classify", "--young", "power:p=2", "--n", "1", "--s", "5/2"], 3),
])
def test_classify_exit_codes(argv, code, capsys):
    got, out = _run(argv + ["--format", "json"], capsys)
    assert got == code
    assert json.loads(out)["exit_code"] == code


def test_malformed_arguments(capsys):
    assert main(["classify", "--young", "power:p=5"]) == 1
    assert main(["classify", "--young", "power:p=5", "--n", "2", "--s", "1"]) == 1


def test_sigma_table_csv(capsys):
    code, out = _run(["sigma-table", "--young", "power:p=5", "--n", "2", "--s", "0.5", "--format", "csv",
                      "--r-min", "0.01", "--r-max", "100", "--per-decade", "1"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("r,theta") and len(lines) == 6
    assert float(lines[1].split(",")[0]) == 0.01


def test_output_is_byte_identical(capsys, tmp_path):
    argv = ["sigma-table", "--young", "powerlog:p0=3,alpha0=0,p=6,alpha=1", "--n", "2", "--s", "0.5",
            "--format", "csv"]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_conjugate(capsys):
    code, out = _run(["conjugate", "--young", "power:p=2", "--t", "1,2"], capsys)
    vals = [r["conjugate"] for r in json.loads(out)["values"]]
    assert code == 0
    np.testing.assert_allclose(vals, [0.25, 1.0], rtol=1e-8)


def test_seminorm_command(capsys, tmp_path):
    code, out = _run(["seminorm", "--young", "power:p=2", "--n", "1", "--s", "0.5", "--format", "json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "Ok"
    np.testing.assert_allclose(rep["seminorm"], np.sqrt(rep["modular"]), rtol=1e-8)
    prof = tmp_path / "f.csv"
    prof.write_text("abscissa,value\n0,2\n0.5,1\n1.5,0\n")
    code, out = _run(["seminorm", "--young", "power:p=2", "--n", "1", "--s", "0.5", "--format", "json",
                      "--profile", str(prof), "--method", "MonteCarlo", "--samples", "20000", "--seed", "4"],
                     capsys)
    rep = json.loads(out)
    assert code == 0 and rep["seed"] == 4 and rep["N"] == 20000 and rep["stderr"] > 0


def test_seminorm_divergent_jump(capsys):
    code, out = _run(["seminorm", "--young", "power:p=2", "--n", "1", "--s", "3/2", "--kind", "RadialHigher",
                      "--format", "json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "Diverges" and rep["seminorm"] == float("inf")


def test_verify_examples(capsys):
    code, out = _run(["verify-examples"], capsys)
    assert code == 0 and "FAIL" not in out


def test_acceptance_subset(capsys):
    code, out = _run(["acceptance", "--criteria", "2,9"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2 and all("PASS" in l for l in lines)
