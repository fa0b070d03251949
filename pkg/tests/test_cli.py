import json
import subprocess
import sys

import pytest

from k3rm.cli import main, parse_element, parse_field, parse_matrix, parse_vector
from k3rm.numfield import NumberField
from k3rm.rmhodge import RMStructure

Q2_ARGS = ["--field", "2", "--m", "3", "--a", "1-a,1-a,1", "--eps", "1"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def check_names(report):
    return {c["name"]: c["pass"] for c in report["checks"]}


def test_construct_rm(capsys):
    code, rep = run(capsys, "construct-rm", *Q2_ARGS)
    assert code == 0
    assert rep["results"]["signature"] == [4, 2]
    assert rep["results"]["det_class"] == 2
    assert all(check_names(rep).values())
    assert rep["inputs"]["a"] == "1-a,1-a,1"


def test_construct_rm_errors(capsys):
    code, rep = run(capsys, "construct-rm", "--field", "2", "--m", "2", "--a", "1-a,1-a", "--eps", "1")
    assert code == 2 and rep["error"] == "RankTooSmall"
    code, rep = run(capsys, "construct-rm", "--field", "2", "--m", "3", "--a", "1+a,1-a,1", "--eps", "1")
    assert code == 2 and rep["error"] == "BadSignPattern"
    assert (rep["k"], rep["embedding"]) == (0, 0)


def test_twist_from_structure_file(capsys, tmp_path):
    _, rep = run(capsys, "construct-rm", *Q2_ARGS)
    path = tmp_path / "s.json"
    path.write_text(json.dumps(rep["results"]["structure"]))
    S = RMStructure.from_json(json.loads(path.read_text()))
    assert S.d == 6
    code, rep = run(capsys, "twist", "--structure", str(path), "--by", "2+a")
    assert code == 0
    assert rep["results"]["verdict"] == "polarization"
    assert rep["results"]["norm_class"] == 2
    assert (rep["results"]["det_class_before"], rep["results"]["det_class_after"]) == (2, 1)
    code, rep = run(capsys, "twist", "--structure", str(path), "--by", "a")
    assert code == 0 and rep["results"]["verdict"] == "not-a-polarization"
    code, rep = run(capsys, "twist", "--structure", str(path), "--by", "1")
    assert rep["results"]["psi_a"] == S.psi.to_json()
    code, rep = run(capsys, "twist", "--structure", str(path), "--by", "0")
    assert code == 2 and rep["error"] == "ZeroElement"


def test_json_input(capsys, tmp_path):
    path = tmp_path / "in.json"
    path.write_text(json.dumps({"field": "5", "m": 3, "a": ["1-a", "1-a", "1"], "eps": 1}))
    code, rep = run(capsys, "--json", str(path), "construct-rm")
    assert code == 0 and rep["results"]["signature"] == [4, 2]


def test_invariants_and_period(capsys):
    code, rep = run(capsys, "invariants", "--psi", "LambdaK3")
    assert code == 0 and rep["results"]["signature"] == [3, 19]
    code, rep = run(capsys, "period", *Q2_ARGS)
    assert code == 0 and all(check_names(rep).values())


def test_simplicity(capsys):
    code, rep = run(capsys, "simplicity", "--psi", "diag(1,-1,-1,1)", "--x", "e2", "--y", "e3")
    assert rep["results"]["verdict"] == "KernelBasis" and len(rep["results"]["kernel"]) == 2
    code, rep = run(capsys, "simplicity", "--psi", "diag(1,-1,-1)", "--field", "2", "--eps", "1",
                    "--x", "1,a,0", "--y", "e3")
    assert rep["results"]["verdict"] == "Simple"


def test_ks(capsys):
    code, rep = run(capsys, "ks", "--psi", "diag(1,1,-1,-1)", "--x", "e3", "--y", "e4")
    assert code == 0
    assert rep["results"]["J"] == {"12": "1"}
    assert rep["results"]["J_check"] is True and rep["results"]["E_valid"] is True
    code, rep = run(capsys, "ks", "--psi", "diag(1,1,-1,-1)", "--x", "e3", "--y", "e4",
                    "--seed1", "e1", "--seed2", "e2")
    assert code == 2 and rep["error"] == "BadSeed"


def test_spin_branch(capsys):
    code, rep = run(capsys, "spin-branch", "--m", "3", "--n", "3")
    assert code == 0
    assert "dim 16 = 2*8" in rep["results"]["identity"]


def test_cores(capsys):
    code, rep = run(capsys, "cores", "--field", "2", "--phi", "1-a,1-a,1", "--eps", "1")
    assert code == 0
    assert rep["results"]["cores_dim"] == 16 and rep["results"]["clifford_even_dim"] == 32


def test_lattice(capsys):
    code, rep = run(capsys, "lattice", "snf", "--fixture", "U2")
    assert code == 0 and rep["results"]["D"] == [[2, 0], [0, 2]]
    code, rep = run(capsys, "lattice", "complement", "--fixture", "U+U", "--sub", "[[1,0,0,0],[0,1,0,0]]")
    assert code == 0 and len(rep["results"]["basis"]) == 2
    code, rep = run(capsys, "lattice", "embed-check", "--fixture", "U", "--T", "U2", "--B", "[[1,0],[0,2]]")
    assert code == 0 and rep["results"]["primitive"] is False
    code, rep = run(capsys, "lattice", "embed-check", "--fixture", "U", "--T", "U2", "--B", "[[1,0],[0,1]]")
    assert code == 2 and rep["error"] == "GramMismatch"


def test_double_cover(capsys):
    code, rep = run(capsys, "example-double-cover", "--d", "13")
    assert code == 0 and all(check_names(rep).values())
    code, rep = run(capsys, "example-double-cover", "--d", "3")
    assert code == 2 and rep["error"] == "NotSumOfTwoSquares"


def test_failed_check_carries_witness_and_exit_1(capsys, monkeypatch):
    from k3rm import cli

    monkeypatch.setattr(cli, "spin_branching", lambda m, n: _Broken())
    code, rep = run(capsys, "spin-branch", "--m", "3", "--n", "2")
    assert code == 1
    failed = [c for c in rep["checks"] if not c["pass"]]
    assert failed and all("witness" in c for c in failed)


class _Broken:
    ok = False
    dims = (8, 2, 3)

    class restricted:
        @staticmethod
        def to_json():
            return [{"weight": [1, 1], "mult": 1}]

    def to_json(self):
        return {"ok": False}


def test_pretty(capsys):
    assert main(["--pretty", "spin-branch", "--m", "2", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] branching multiset identity" in out


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "k3rm", "lattice", "snf", "--fixture", "U2"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["results"]["invariant_factors"] == [2, 2]


def test_parsers(Q2):
    assert parse_field("Q").degree == 1
    assert parse_field("d=5") == NumberField.quadratic(5)
    assert parse_field("1,-3,0,1").degree == 3
    assert parse_element(Q2, "3/2*a^2 - a") == 3 - Q2.gen
    assert parse_element(Q2, "[1, 2]") == 1 + 2 * Q2.gen
    assert parse_matrix("diag(1,-1)") == [[1, 0], [0, -1]]
    assert len(parse_matrix("U+U2")) == 4
    assert parse_vector(Q2, "e2", 3) == [0, 1, 0]
    with pytest.raises(ValueError):
        parse_element(Q2, "__import__('os')")
