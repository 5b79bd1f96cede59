import io
import json
import subprocess
import sys

import pytest

from nomstlc.cli import main
from nomstlc.models import bundled_model_path

SOURCE = """\
types t
const C : t
const F : t -> t
context 'b : t, X : t
def id_redex = (\\a:t. a) C
def c = C
def open = \\a:t. X['b := a]
def twice = (\\f:t -> t. f (f 'b)) F
val X = 'b
"""

BROKEN = SOURCE + "def bad = X['c := C]\n"


@pytest.fixture
def src(tmp_path):
    f = tmp_path / "demo.lam"
    f.write_text(SOURCE)
    return str(f)


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_check(src, tmp_path):
    code, out = run("check", src)
    assert code == 0
    assert out.splitlines() == ["id_redex : t", "c : t", "open : t -> t", "twice : t"]
    bad = tmp_path / "bad.lam"
    bad.write_text(BROKEN)
    code, out = run("--json", "check", str(bad))
    report = json.loads(out)
    assert code == 1 and not report["ok"]
    assert report["definitions"][-1] == {
        "name": "bad", "ok": False, "error": "UntypedModerationDomain", "rule": "Meta",
        "path": ["['c]"], "message": "moderated atom 'c has no typing", "line": 10}


def test_norm(src):
    assert run("norm", src, "twice") == (0, "F (F 'b)\n")
    code, out = run("norm", src, "twice", "--trace")
    assert out.splitlines() == ["(\\f:t -> t. f (f 'b)) F", "  --> F (F 'b)    [at <root>]"]
    report = json.loads(run("norm", src, "twice", "--trace", "--json")[1])
    assert report["steps"] == 1 and report["trace"][0]["path"] == []


def test_eq(src):
    assert run("eq", src, "id_redex", "c") == (0, "id_redex and c are equal\n")
    assert run("eq", src, "twice", "c") == (0, "twice and c are not equal\n")
    assert run("eq", src, "open", "c")[0] == 1


def test_subst(src):
    assert run("subst", src, "open", "--l2", "X:='b") == (0, "\\a:t. a\n")
    assert run("subst", src, "open", "--l1", "'b:=C") == (0, "\\a:t. X['b:=a]\n")
    assert run("subst", src, "twice", "--l1", "'b:=C") == (0, "(\\f:t -> t. f (f C)) F\n")
    assert run("subst", src, "open", "--l2", "X:=(")[0] == 1


def test_interp(src):
    assert run("interp", src, "open") == (0, "\\a:t. a\n")
    assert run("interp", src, "twice") == (0, "F (F 'b)\n")


def test_interp_finite_model(tmp_path):
    f = tmp_path / "fin.lam"
    f.write_text(f"types tau\ncontext 'a : tau, X : tau\ndef r = X['a := 'a]\ndef s = X\nval X = 1\n"
                 f"model {bundled_model_path()}\n")
    assert run("interp", str(f), "r") == (0, "0\n")
    assert run("interp", str(f), "s") == (0, "1\n")


def test_axioms_counterexample():
    code, out = run("axioms", str(bundled_model_path()))
    assert code == 0
    assert "Sub# FAILS, witness z=1" in out
    assert out.splitlines()[0].startswith("Suba holds")
    report = json.loads(run("--json", "axioms", "bundled:sub_fresh_counterexample")[1])
    assert report["partial"] and report["missing_cells"] == ["no carrier at type tau -> tau"]


def test_axioms_term_model_deterministic():
    a = run("axioms", "term", "--samples", "15", "--seed", "3")
    b = run("axioms", "term", "--samples", "15", "--seed", "3")
    assert a == b and a[0] == 0
    assert all(" holds " in line for line in a[1].splitlines())


def test_diagnostics(src, tmp_path):
    assert run("norm", src, "nothing")[0] == 1
    assert run("check", str(tmp_path / "absent.lam"))[0] == 1
    bad = tmp_path / "syntax.lam"
    bad.write_text("types t\ndef a = (\n")
    code, out = run("check", str(bad))
    assert code == 1 and ":2:" in out
    bad_model = tmp_path / "bad.model"
    bad_model.write_text("[oops]\n")
    assert run("axioms", str(bad_model))[0] == 1


def test_module_entry_point(src):
    proc = subprocess.run([sys.executable, "-m", "nomstlc", "eq", src, "id_redex", "c"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "id_redex and c are equal\n"
