import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nomstlc.atoms import Atom
from nomstlc.concrete import (
    ParseError,
    SortError,
    load_source,
    parse_atom,
    parse_context,
    parse_l1,
    parse_l2,
    parse_source,
    parse_term,
    parse_type,
)
from nomstlc.gen import TermGenerator, default_signature
from nomstlc.syntax import App, Arrow, AtomTerm, Base, Const, Lam, Unk, alpha_eq, show

SIG = default_signature()
t = Base("t")


def test_parse_term_shapes():
    r = parse_term("\\a:t. X['b := a]")
    assert r == Lam(Atom.up("a"), t, Unk("X", ((Atom.down("b"), AtomTerm(Atom.up("a"))),)))
    assert parse_term("λa:t -> t. a") == Lam(Atom.up("a"), Arrow(t, t), AtomTerm(Atom.up("a")))
    assert parse_term("f x y") == App(App(AtomTerm(Atom.up("f")), AtomTerm(Atom.up("x"))), AtomTerm(Atom.up("y")))
    assert parse_term("F \\a:t. a", ["F"]) == App(Const("F"), Lam(Atom.up("a"), t, AtomTerm(Atom.up("a"))))
    assert parse_term("C -- trailing comment", ["C"]) == Const("C")


def test_constants_shadow_unknowns():
    assert parse_term("C", ["C"]) == Const("C")
    assert parse_term("C") == Unk("C")
    with pytest.raises(ParseError):
        parse_term("C['b:=a]", ["C"])


def test_types_are_right_associative():
    assert parse_type("t -> t -> t") == Arrow(t, Arrow(t, t))
    assert parse_type("(t -> t) -> t") == Arrow(Arrow(t, t), t)


@pytest.mark.parametrize(
    "text,cls",
    [("\\'b:t. 'b", SortError), ("X[a:=C]", SortError), ("(a", ParseError), ("X['b:=a,'b:=a]", ParseError)],
)
def test_parse_errors(text, cls):
    with pytest.raises(cls):
        parse_term(text)


def test_error_position():
    with pytest.raises(ParseError) as info:
        parse_term("\\a:t. a )")
    assert (info.value.line, info.value.col) == (1, 9)


def test_substitution_and_context_syntax():
    assert parse_l1("'b:=a, c:='d") == {Atom.down("b"): AtomTerm(Atom.up("a")), Atom.up("c"): AtomTerm(Atom.down("d"))}
    assert parse_l2("X:=C", ["C"]) == {"X": Const("C")}
    with pytest.raises(ParseError):
        parse_l2("C:=a", ["C"])
    ctx = parse_context("'b : t, X : t -> t")
    assert ctx.atoms == {Atom.down("b"): t} and ctx.unknowns == {"X": Arrow(t, t)}
    assert parse_atom("'b'") == Atom.down("b'")


@given(st.integers(0, 10**6))
def test_print_parse_roundtrip(seed):
    g = TermGenerator(SIG, random.Random(seed))
    ctx = g.context()
    r, _ = g.typed(ctx, size=15, max_size=25)
    assert alpha_eq(parse_term(show(r), SIG.constants), r)


SOURCE = """\
-- a small development
types t, o
const C : t
const P : t -> o
context 'b : t,
        X : t
def id_redex = (\\a:t. a) C
def long = P
    ((\\a:t. a) 'b)   -- continued on an indented line
val X = 'b
model counter.model
"""


def test_parse_source(tmp_path):
    f = tmp_path / "dev.lam"
    f.write_text(SOURCE)
    src = load_source(f)
    assert src.signature.base_types == {"t", "o"}
    assert src.signature.constants == {"C": t, "P": Arrow(t, Base("o"))}
    assert src.context == parse_context("'b:t, X:t")
    assert show(src.term("long")) == "P ((\\a:t. a) 'b)"
    assert src.lines == {"id_redex": 7, "long": 8}
    assert src.valuation == {"X": "'b"}
    assert src.model_path() == tmp_path / "counter.model"
    with pytest.raises(KeyError):
        src.term("missing")


@pytest.mark.parametrize(
    "text,where",
    [
        ("const C : t\n", (1, 7)),
        ("types t\nbogus x\n", (2, 1)),
        ("types t\ndef a = (\\x:t. x\n", (2, 17)),
        ("types t\nconst C : t\ncontext C : t\n", (3, 9)),
        ("types t\ndef a = C\ndef a = C\n", (3, 5)),
    ],
)
def test_source_errors_are_positioned(text, where):
    with pytest.raises(ParseError) as info:
        parse_source(text)
    assert (info.value.line, info.value.col) == where
