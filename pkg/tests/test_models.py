import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nomstlc.atoms import EMPTY, Atom, atomset, swap
from nomstlc.concrete import parse_context, parse_term
from nomstlc.gen import TermGenerator, default_signature
from nomstlc.models import (
    AXIOMS,
    ModelError,
    ModelFileError,
    SamplingPlan,
    TermModel,
    UndefinedCell,
    Valuation,
    bundled_model_path,
    check_axioms,
    interp,
    load_finite_model,
    parse_finite_model,
    satisfies,
    validate,
)
from nomstlc.syntax import Arrow, Base, free_atoms

from oracles import random_valuation

SIG = default_signature()
CONSTS = SIG.constants
M = TermModel(SIG)
t = Base("t")
a, db = Atom.up("a"), Atom.down("b")


def el(ctx, text):
    return M.element(parse_context(ctx), parse_term(text, CONSTS))


# term model


def test_term_model_operations():
    s = el("'b:t", "F 'b")
    assert M.app_elem(M.abs_elem(a, t, M.atom_elem(a, t)), s) == s
    assert M.supp(el("", "\\a:t. a")) == EMPTY
    assert el("", "(\\a:t. a) C") == el("", "C")
    assert el("", "\\a:t. a") == el("", "\\c:t. c")
    assert M.supp(el("'b:t", "(\\a:t. C) 'b")) == EMPTY
    assert M.const_elem("F") == el("", "F")
    assert M.subst_elem(el("'b:t", "G 'b 'b"), db, el("", "C")) == el("", "G C C")
    assert M.perm_elem(swap(a, Atom.up("c")), el("a:t", "F a")) == el("c:t", "F c")


def test_term_model_rejects_bad_input():
    with pytest.raises(ValueError):
        el("", "C C")
    with pytest.raises(ValueError):
        el("X:t", "X")
    with pytest.raises(ValueError):
        M.app_elem(el("", "C"), el("", "C"))


def test_contains_ignores_unknowns():
    x = el("'b:t", "F 'b")
    assert M.contains(parse_context("'b:t, X:t"), t, x)
    assert not M.contains(parse_context("X:t"), t, x)
    assert not M.contains(parse_context("'b:t"), Arrow(t, t), x)


def test_sim_subst_edge_cases():
    x = el("'b:t, 'c:t", "G 'b 'c")
    assert M.sim_subst(x, []) is x
    y = el("", "C")
    assert M.sim_subst(x, [(db, y)]) == M.subst_elem(x, db, y)
    dc = Atom.down("c")
    swapped = M.sim_subst(x, [(db, el("'c:t", "'c")), (dc, el("'b:t", "'b"))])
    assert swapped == el("'b:t, 'c:t", "G 'c 'b")
    with pytest.raises(ValueError):
        M.sim_subst(x, [(db, y), (db, y)])
    with pytest.raises(ValueError):
        M.sim_subst(x, [(db, y)], ctx=parse_context("'c:t"))


def test_valuation_needs_down_support():
    with pytest.raises(ModelError):
        Valuation(M, {"X": el("a:t", "a")})
    v = Valuation(M, {"X": el("'b:t", "'b")})
    assert satisfies(M, parse_context("'b:t, X:t"), v)
    assert not satisfies(M, parse_context("X:t -> t"), v)


def test_interp_examples():
    ctx = parse_context("'b:t, X:t")
    v = Valuation(M, {"X": el("'b:t", "'b")})
    assert interp(M, v, ctx, parse_term("'b")) == M.atom_elem(db, t)
    assert interp(M, v, ctx, parse_term("(\\a:t. a) C", CONSTS)) == el("", "C")
    assert interp(M, v, ctx, parse_term("\\a:t. X['b:=a]")) == el("", "\\a:t. a")
    with pytest.raises(ModelError):
        interp(M, Valuation(M), ctx, parse_term("X"))


def test_validate_examples():
    ctx = parse_context("a:t, b:t")
    empty = Valuation(M)
    assert validate(M, empty, ctx, parse_term("(\\c:t. c) a"), parse_term("a"))
    assert not validate(M, empty, ctx, parse_term("a"), parse_term("b"))
    with pytest.raises(ValueError):
        validate(M, empty, ctx, parse_term("a"), parse_term("F", CONSTS))


@settings(max_examples=50)
@given(st.integers(0, 10**6))
def test_first_soundness(seed):
    g = TermGenerator(SIG, random.Random(seed))
    ctx = g.context()
    val = random_valuation(M, g, ctx)
    r, ty = g.typed(ctx, size=12, max_size=20)
    assert M.contains(ctx, ty, interp(M, val, ctx, r))


@settings(max_examples=50)
@given(st.integers(0, 10**6))
def test_term_model_support_is_free_atoms(seed):
    g = TermGenerator(SIG, random.Random(seed), holes=False)
    ctx = g.context()
    x = M.element(ctx, g.typed(ctx, size=12)[0])
    for b, ty in ctx.atoms.items():
        if b not in M.supp(x):
            assert b not in free_atoms(x.normal_form)
            if ty == t:
                assert M.subst_elem(x, b, M.const_elem("C")) == x


def test_term_model_report_is_deterministic():
    plan = SamplingPlan(samples=30, seed=4)
    assert check_axioms(M, plan).to_dict() == check_axioms(M, plan).to_dict()


# finite models

COUNTER = load_finite_model(bundled_model_path())


def test_bundled_model_loads_partial():
    assert COUNTER.elements == {"a_tau", "0", "1"}
    assert COUNTER.partial
    assert COUNTER.missing == ["no carrier at type tau -> tau"]
    assert COUNTER.check_invariants() == []
    assert COUNTER.supp("a_tau") == atomset([Atom.down("a")])


def test_counterexample_validity():
    ctx = parse_context("'a:tau, X:tau")
    r, s = parse_term("X['a:='a]"), parse_term("X")
    assert not validate(COUNTER, Valuation(COUNTER, {"X": "1"}), ctx, r, s)
    assert validate(COUNTER, Valuation(COUNTER, {"X": "0"}), ctx, r, s)
    assert interp(COUNTER, {}, ctx, parse_term("'a")) == "a_tau"


def test_counterexample_report():
    report = check_axioms(COUNTER)
    lines = report.lines()
    assert lines[1].startswith("Sub# FAILS, witness z=1")
    assert lines[4].startswith("SubId (optional) FAILS, witness z=1")
    assert report["SubApp"].checked == 0
    assert [r["status"] for r in report.to_dict()["axioms"]] == [
        "holds-on-samples", "fails", "holds-on-samples", "holds-on-samples", "fails"]


def test_empty_model():
    m = parse_finite_model("-- nothing here\n")
    assert m.carriers == {} and not m.partial and m.signature is None
    assert all(check_axioms(m)[ax].checked == 0 for ax in AXIOMS)


REPAIRED = bundled_model_path().read_text().replace("1     | 'a | a_tau | 0", "1     | 'a | a_tau | 1") \
    .replace("1     | 'a | 0     | 0", "1     | 'a | 0     | 1").replace("1     | 'a | 1     | 0", "1     | 'a | 1     | 1")


def test_repaired_model_satisfies_axioms():
    m = parse_finite_model(REPAIRED)
    report = check_axioms(m)
    assert all(report[ax].holds for ax in AXIOMS)


SWAPPED = """
[carriers]
'a:t, 'b:t | t | ea eb k
[atoms]
'a | t | ea
'b | t | eb
[supp]
ea | 'a
eb | 'b
[perm]
'a 'b | ea | eb
'a 'b | eb | ea
"""


def test_perm_table():
    m = parse_finite_model(SWAPPED)
    da, dbb = Atom.down("a"), Atom.down("b")
    assert m.perm_elem(swap(da, dbb), "ea") == "eb"
    assert m.perm_elem(swap(da, dbb), "k") == "k"
    with pytest.raises(UndefinedCell):
        m.perm_elem(swap(da, Atom.down("c")), "ea")
    with pytest.raises(UndefinedCell):
        m.subst_elem("ea", da, "eb")
    assert m.check_invariants() == []


@pytest.mark.parametrize(
    "text,needle",
    [
        ("[carriers]\n'a:t | t | x\n[subst]\nx | 'a | y | x\n", "not in any carrier"),
        ("[carriers]\n'a:t | t | x y\n[supp]\nx | 'a\ny | 'a\n[perm]\n'a 'b | x | y\n'a 'b | y | y\n", "bijection"),
        ("[carriers]\n'a:t | t | x y\n[perm]\n'a 'b | x | y\n'a 'b | y | x\n", "support is empty"),
        ("[tables]\n", "unknown section"),
        ("[app]\nx | y\n", "3 fields"),
        ("x | y\n", "before any section"),
        ("[carriers]\n'a:t | t | x\n[abs]\n'a | t | x | x\n", "DOWN atom"),
        ("[carriers]\n'a:t | t -> | x\n", "<model>:2"),
    ],
)
def test_model_file_errors(text, needle):
    with pytest.raises(ModelFileError) as info:
        parse_finite_model(text)
    assert needle in str(info.value)


def test_invariant_violations_are_reported():
    m = parse_finite_model("[carriers]\n'a:t | t | x\n[supp]\nx | 'b\n")
    assert any("outside its context" in v for v in m.check_invariants())
    m = parse_finite_model("[carriers]\n'a:t | t | x\n'b:t | t | x\n")
    assert any("intersection" in v for v in m.check_invariants())
