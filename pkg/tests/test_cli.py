import json
import subprocess
import sys
from pathlib import Path

import pytest

from bicov.cli import main, parse_poly
from bicov.cells import oq

MATRICES = Path(__file__).resolve().parent.parent / "matrices"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_nf(capsys):
    code, rep, _ = run(capsys, "nf", "dab")
    assert code == 0
    assert rep["data"]["normal_form"] == "b + q*b^2c"
    assert len(rep["data"]["rules"]) == 7


def test_nf_quantum_determinant(capsys):
    code, rep, _ = run(capsys, "nf", "a*d - q^-1*b*c")
    assert code == 0 and rep["data"]["normal_form"] == "1"


def test_poly_parser():
    H = oq()
    t = parse_poly("(q+1)^2*d^2a - 3/2", H.alphabet, H.field)
    q = H.field.q
    assert t == {(): H.field(-1) * 3 / 2, H.alphabet.word("dda"): (q + 1) * (q + 1)}
    assert parse_poly("b^0", H.alphabet, H.field) == {(): H.field.one}


def test_nf_degree_limit(capsys):
    code, rep, _ = run(capsys, "nf", "a^4", "--max-degree", "3")
    assert code == 1 and rep["status"] == "fail"


def test_nf_over_a_matrix_file(capsys):
    code, rep, _ = run(capsys, "nf", "a11*a22", "--matrix", str(MATRICES / "I3.json"),
                       "--truncation", "3")
    assert code == 0
    assert rep["data"]["normal_form"]


@pytest.mark.parametrize("argv", [["nf", "a +"], ["nf", "xyz"], ["nf", "s*a", "--matrix", "MAT"],
                                  ["transport", "--matrix", "missing.json"],
                                  ["transport", "--matrix", "ROOT"],
                                  ["transport", "--matrix", "MAT", "--n", "1", "--m", "2"],
                                  ["classify"], ["verify", "--suite", "nope"],
                                  ["coinv", "--n", "1", "--m", "1", "--jobs", "0"]])
def test_usage_errors_exit_2(capsys, argv):
    argv = [str(MATRICES / "I3.json") if a == "MAT" else
            str(MATRICES / "root_of_unity.json") if a == "ROOT" else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_root_of_unity_message(capsys):
    code, _, err = run(capsys, "transport", "--matrix", str(MATRICES / "root_of_unity.json"))
    assert code == 2 and "RootOfUnity" in err


def test_coinv(capsys):
    code, rep, _ = run(capsys, "coinv", "--n", "1", "--m", "1")
    assert code == 0
    assert rep["data"]["dim"] == 1
    assert rep["data"]["basis"] == [{"v0(x)v1": "1", "v1(x)v0": "-q"}]
    code, rep, _ = run(capsys, "coinv", "--n", "1", "--m", "2")
    assert rep["data"]["dim"] == 0


def test_classify(capsys):
    code, rep, _ = run(capsys, "classify", "--max-dim", "4")
    assert code == 0 and rep["data"]["count"] == 3
    code, rep, _ = run(capsys, "classify", "--max-dim", "9", "--include-zero")
    assert rep["data"]["count"] == 10


def test_transport_report(capsys):
    code, rep, _ = run(capsys, "transport", "--matrix", str(MATRICES / "I3.json"),
                       "--n", "1", "--epsilon", "-1")
    assert code == 0
    d = rep["data"]
    assert d["dim_W"] == 9 and d["dim_V"] == 4
    assert d["tau"] == "3"
    assert d["q"] == "q^2 + 3*q + 1 = 0"
    assert set(d["actions"]) == {f"a{i}{j}" for i in range(1, 4) for j in range(1, 4)}
    assert d["eta"]["rank"] == 9


def test_transport_symbolic(capsys):
    code, rep, _ = run(capsys, "transport", "--matrix", str(MATRICES / "E_sym.json"),
                       "--n", "1", "--epsilon", "+1")
    assert code == 0 and rep["data"]["dim_W"] == 4


def test_roundtrip(capsys):
    code, rep, _ = run(capsys, "roundtrip", "--matrix", str(MATRICES / "I3.json"))
    assert code == 0 and rep["status"] == "pass"


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["coinv", "--n", "2", "--m", "2", "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["data"]["dim"] == 1


def test_verify_suite_jobs_agree(capsys):
    _, one, _ = run(capsys, "verify", "--suite", "yd")
    code, two, _ = run(capsys, "verify", "--suite", "yd", "--jobs", "3")
    assert code == 0
    assert one == two


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "bicov", "coinv", "--n", "0", "--m", "0"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["data"]["dim"] == 1
