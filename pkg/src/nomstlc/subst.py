"""Capture-avoiding atom substitution and instantiation of unknowns.

A level-1 substitution is a finite map from atoms to terms, applied
simultaneously.  On a moderated unknown it composes with the pending
moderation instead of being pushed inside.  A level-2 substitution maps
unknowns to terms; it may capture DOWN atoms through the moderation.
"""
from __future__ import annotations

from typing import Mapping

from .atoms import Atom, Permutation, fresh_up, swap
from .syntax import (
    App,
    AtomTerm,
    Const,
    Lam,
    Term,
    Unk,
    _act,
    free_atoms,
    free_unknowns,
    perm_act,
)

SubstL1 = Mapping[Atom, Term]
SubstL2 = Mapping[str, Term]


def _l1(r: Term, sigma: SubstL1, avoid: frozenset[Atom]) -> Term:
    if isinstance(r, AtomTerm):
        return sigma.get(r.atom, r)
    if isinstance(r, Const):
        return r
    if isinstance(r, App):
        return App(_l1(r.fun, sigma, avoid), _l1(r.arg, sigma, avoid))
    if isinstance(r, Lam):
        c, body = r.binder, r.body
        if c in avoid:
            fresh = fresh_up(avoid | free_atoms(body).up_atoms() | {c})
            body = _act(swap(fresh, c), body)
            c = fresh
        return Lam(c, r.ty, _l1(body, sigma, avoid))
    kept = [(b, _l1(s, sigma, avoid)) for b, s in r.moderation]
    present = {b for b, _ in r.moderation}
    added = sorted((b, s) for b, s in sigma.items() if b.is_down and b not in present)
    return Unk(r.name, tuple(kept + added))


def subst_l1(r: Term, sigma: SubstL1) -> Term:
    """Simultaneous capture-avoiding substitution ``r[a1:=s1, ...]``.

    Entries for UP atoms do not survive onto an unknown: only DOWN atoms
    can reach through a moderation.
    """
    if not sigma:
        return r
    sigma = dict(sigma)
    avoid = set(a for a in sigma if a.is_up)
    for s in sigma.values():
        avoid |= free_atoms(s).up_atoms()
    return _l1(r, sigma, frozenset(avoid))


def subst_one(r: Term, a: Atom, t: Term) -> Term:
    return subst_l1(r, {a: t})


def subst_l2(r: Term, theta: SubstL2) -> Term:
    """Instantiate unknowns: ``X[b:=s] theta = theta(X)[b:=s theta]``."""
    if not theta:
        return r
    theta = dict(theta)
    ups = {x: free_atoms(t).up_atoms() for x, t in theta.items()}

    def go(t: Term) -> Term:
        if isinstance(t, (AtomTerm, Const)):
            return t
        if isinstance(t, App):
            return App(go(t.fun), go(t.arg))
        if isinstance(t, Lam):
            c, body = t.binder, t.body
            avoid = frozenset().union(*(ups[x] for x in free_unknowns(body) if x in ups))
            if c in avoid:
                fresh = fresh_up(avoid | free_atoms(body).up_atoms() | {c})
                body = _act(swap(fresh, c), body)
                c = fresh
            return Lam(c, t.ty, go(body))
        mod = {b: go(s) for b, s in t.moderation}
        if t.name in theta:
            return subst_l1(theta[t.name], mod)
        return Unk(t.name, tuple(mod.items()))

    return go(r)


def perm_subst(pi: Permutation, sigma: SubstL1) -> dict[Atom, Term]:
    """``pi . sigma``: maps ``pi(a)`` to ``pi . sigma(a)``."""
    return {pi(a): perm_act(pi, s) for a, s in sigma.items()}
