import json
import subprocess
import sys

import pytest

from fglschur.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_q(capsys):
    code, out, _ = run(capsys, "compute", "Q", "--lambda", "1", "--n", "1", "--fgl", "additive", "--degree", "3")
    assert code == 0
    assert out.strip() == "2*x1"


def test_compute_json(capsys):
    code, out, _ = run(capsys, "compute", "P", "--lambda", "2,1", "--n", "2", "--fgl", "k-theory", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["command"] == "compute P"
    assert obj["config"]["fgl"] == "k-theory"


def test_lost_precision_is_shown(capsys):
    _, out, _ = run(capsys, "compute", "phatK", "--lambda", "2,1", "--ny", "2", "--degree", "4", "--fgl", "k-theory")
    assert out.strip() == "0 + O(degree 2)"


def test_phatk_word_and_kernel_agree(capsys):
    args = ["compute", "phatK", "--lambda", "2,1", "--ny", "2", "--degree", "6", "--fgl", "k-theory"]
    _, a, _ = run(capsys, *args)
    _, c, _ = run(capsys, *args, "--via", "word")
    assert a == c
    assert "y1^2*y2" in a


def test_dual(capsys):
    code, out, _ = run(capsys, "dual", "phat", "--lambda", "1", "--ny", "2", "--degree", "3", "--fgl", "additive")
    assert code == 0
    assert out.strip() == "phat[1] = y1 + y2 + O(degree 3)"


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "factorization", "--n", "3", "--degree", "5")
    assert code == 0
    assert "factorization: PASS" in out


def test_verify_list(capsys):
    code, out, _ = run(capsys, "verify", "--list")
    assert code == 0
    assert "k-recursion" in out.split()


def test_type_d_flag(capsys):
    code, out, _ = run(capsys, "verify", "k-recursion", "--max-size", "1", "--type-d", "--fgl", "k-theory")
    assert code == 0
    assert "(report) type D" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "P", "--lambda", "2,2", "--n", "2"],
        ["compute", "P", "--lambda", "1", "--degree", "13"],
        ["compute", "P", "--lambda", "1", "--fgl", "elliptic"],
        ["verify"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_unknown_command(capsys):
    code, _, err = run(capsys, "bogus")
    assert code == 2
    assert "invalid choice" in err


def test_conjecture_json(capsys):
    code, out, _ = run(capsys, "conjecture", "gp", "--max-size", "4", "--ny", "4", "--json")
    assert code == 0
    rows = json.loads(out)["report"]["results"]["gp"]
    assert [tuple(r["lambda"]) for r in rows] == [(1,), (2,), (3,), (2, 1), (4,), (3, 1)]
    assert all(r["beta=-1"]["status"] == "PASS" for r in rows)


def test_json_is_deterministic():
    argv = [sys.executable, "-m", "fglschur", "verify", "cauchy", "--degree", "3", "--json"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    c = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == c
    assert json.loads(a)
