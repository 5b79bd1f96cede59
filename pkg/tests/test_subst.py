import random

from hypothesis import given
from hypothesis import strategies as st

from nomstlc.atoms import Atom, swap
from nomstlc.concrete import parse_l1, parse_l2, parse_term
from nomstlc.gen import TermGenerator, default_signature
from nomstlc.subst import perm_subst, subst_l1, subst_l2, subst_one
from nomstlc.syntax import AtomTerm, alpha_eq, free_atoms, perm_act, show
from nomstlc.typecheck import infer

SIG = default_signature()
CONSTS = SIG.constants


def p(text):
    return parse_term(text, CONSTS)


def l1(r, text):
    return show(subst_l1(p(r), parse_l1(text, CONSTS)))


def l2(r, text):
    return show(subst_l2(p(r), parse_l2(text, CONSTS)))


def test_level1_examples():
    assert l1("G 'b 'c", "'b:='c, 'c:='b") == "G 'c 'b"
    assert l1("\\a:t. G a 'b", "'b:=a") == "\\b:t. G b a"
    assert l1("\\a:t. G a 'b", "'b:=C") == "\\a:t. G a C"
    # a binder in the domain is renamed, leaving an alpha-equal term
    assert l1("\\a:t. a", "a:=C") == "\\b:t. b"
    # an UP entry does not reach past a moderation, a DOWN entry is recorded
    assert l1("X", "a:=C") == "X"
    assert l1("X", "'b:=C") == "X['b:=C]"
    assert l1("X['c:=a]", "'b:=C, a:=D") == "X['c:=D,'b:=C]"


def test_level2_examples():
    assert l2("X['b:=C]", "X:='b") == "C"
    assert l2("X['b:=C]", "X:=F 'c") == "F 'c"
    # the binder is renamed when it would capture an UP atom of the instance
    assert l2("\\a:t. X", "X:=a") == "\\b:t. a"
    assert l2("\\a:t. X['b:=a]", "X:=G 'b a") == "\\b:t. G b a"
    assert l2("Y['b:=X]", "X:=C") == "Y['b:=C]"
    assert l2("Y['b:=X]", "X:=C, Y:='b") == "C"


def test_perm_subst():
    a, b = Atom.up("a"), Atom.up("b")
    pi = swap(a, b)
    sigma = {a: p("G a 'c")}
    assert perm_subst(pi, sigma) == {b: p("G b 'c")}


def generated(seed, holes=True):
    g = TermGenerator(SIG, random.Random(seed), holes=holes)
    ctx = g.context()
    r, ty = g.typed(ctx, size=12, max_size=20)
    return g, ctx, r, ty


@given(st.integers(0, 10**6))
def test_empty_and_dead_substitutions_are_identities(seed):
    g, ctx, r, ty = generated(seed)
    assert subst_l1(r, {}) == r and subst_l2(r, {}) == r
    for a in sorted(ctx.atoms):
        if a not in free_atoms(r):
            assert alpha_eq(subst_one(r, a, AtomTerm(Atom.up(40))), r)


@given(st.integers(0, 10**6))
def test_substituting_an_atom_for_itself(seed):
    g, ctx, r, ty = generated(seed, holes=False)
    for a in sorted(ctx.atoms):
        assert alpha_eq(subst_one(r, a, AtomTerm(a)), r)


@given(st.integers(0, 10**6))
def test_simultaneous_is_sequential_through_fresh_atoms(seed):
    # hole-free only: a moderation would record the staging atoms
    g, ctx, r, ty = generated(seed, holes=False)
    downs = sorted(a for a in ctx.atoms if a.is_down)[:2]
    if len(downs) < 2:
        return
    b1, b2 = downs
    s1, s2 = (g.typed(ctx, 5, ty=ctx.atoms[b])[0] for b in downs)
    c1, c2 = Atom.down(50), Atom.down(51)
    staged = subst_l1(r, {b1: AtomTerm(c1), b2: AtomTerm(c2)})
    sequential = subst_one(subst_one(staged, c1, s1), c2, s2)
    assert alpha_eq(subst_l1(r, {b1: s1, b2: s2}), sequential)


@given(st.integers(0, 10**6))
def test_substitution_is_equivariant(seed):
    g, ctx, r, ty = generated(seed)
    a = g.rng.choice(sorted(ctx.atoms))
    s, _ = g.typed(ctx, 5, ty=ctx.atoms[a])
    pi = g.up_permutation(3)
    lhs = perm_act(pi, subst_one(r, a, s))
    rhs = subst_l1(perm_act(pi, r), perm_subst(pi, {a: s}))
    assert alpha_eq(lhs, rhs)


@given(st.integers(0, 10**6))
def test_level2_then_type(seed):
    g, ctx, r, ty = generated(seed)
    theta = {x: g.typed(ctx, 6, ty=t)[0] for x, t in ctx.unknowns.items()}
    assert infer(SIG, ctx, subst_l2(r, theta)) == ty
