"""Simple types, terms with moderated unknowns, and their basic operations.

Terms are immutable trees.  ``Unk(X, ((b1, s1), ...))`` is the unknown ``X``
carrying a pending substitution ``[b1:=s1, ...]`` over DOWN atoms; the
moderation is kept in insertion order for printing but compared as a map.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .atoms import (
    EMPTY,
    AtomSet,
    Atom,
    CofiniteDown,
    Finite,
    Permutation,
    fresh_up,
    swap,
)


class InvalidPermutation(ValueError):
    """A permutation moved a DOWN atom where only UP atoms may move."""


# ----------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Arrow:
    dom: "SimpleType"
    cod: "SimpleType"

    def __str__(self):
        left = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{left} -> {self.cod}"


SimpleType = Union[Base, Arrow]


def arrow(*tys: SimpleType) -> SimpleType:
    """Right-associated arrow: ``arrow(a, b, c) == a -> (b -> c)``."""
    *doms, out = tys
    for d in reversed(doms):
        out = Arrow(d, out)
    return out


def base_names(ty: SimpleType) -> set[str]:
    if isinstance(ty, Base):
        return {ty.name}
    return base_names(ty.dom) | base_names(ty.cod)


@dataclass(frozen=True)
class Signature:
    base_types: frozenset[str]
    constants: Mapping[str, SimpleType] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "base_types", frozenset(self.base_types))
        object.__setattr__(self, "constants", dict(self.constants))
        if not self.base_types:
            raise ValueError("a signature needs at least one base type")
        for name, ty in self.constants.items():
            missing = base_names(ty) - self.base_types
            if missing:
                raise ValueError(f"constant {name} uses undeclared base types {sorted(missing)}")

    def __hash__(self):
        return hash((self.base_types, frozenset(self.constants.items())))

    def type_of(self, name: str) -> SimpleType:
        return self.constants[name]


# ----------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class AtomTerm:
    atom: Atom

    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class Lam:
    binder: Atom
    ty: SimpleType
    body: "Term"

    def __post_init__(self):
        if not self.binder.is_up:
            raise ValueError(f"lambda binder must be an UP atom, got {self.binder}")

    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"

    def __str__(self):
        return show(self)


@dataclass(frozen=True, eq=False)
class Unk:
    name: str
    moderation: tuple[tuple[Atom, "Term"], ...] = ()

    def __post_init__(self):
        mod = tuple((b, s) for b, s in self.moderation)
        object.__setattr__(self, "moderation", mod)
        doms = [b for b, _ in mod]
        if any(not b.is_down for b in doms):
            raise ValueError(f"moderation of {self.name} may only substitute DOWN atoms")
        if len(set(doms)) != len(doms):
            raise ValueError(f"moderation of {self.name} repeats an atom")

    def mod_map(self) -> dict[Atom, "Term"]:
        return dict(self.moderation)

    def __eq__(self, other):
        if not isinstance(other, Unk):
            return NotImplemented
        return self.name == other.name and self.mod_map() == other.mod_map()

    def __hash__(self):
        return hash((self.name, frozenset(self.moderation)))

    def __str__(self):
        return show(self)


Term = Union[AtomTerm, Const, Lam, App, Unk]


def atom(a: Atom) -> AtomTerm:
    return AtomTerm(a)


def unk(name: str, moderation: Union[Mapping[Atom, Term], Iterable] = ()) -> Unk:
    if isinstance(moderation, Mapping):
        moderation = tuple(moderation.items())
    return Unk(name, tuple(moderation))


def apps(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def size(r: Term) -> int:
    if isinstance(r, (AtomTerm, Const)):
        return 1
    if isinstance(r, Lam):
        return 1 + size(r.body)
    if isinstance(r, App):
        return 1 + size(r.fun) + size(r.arg)
    return 1 + sum(size(s) for _, s in r.moderation)


def is_hole_free(r: Term) -> bool:
    if isinstance(r, (AtomTerm, Const)):
        return True
    if isinstance(r, Lam):
        return is_hole_free(r.body)
    if isinstance(r, App):
        return is_hole_free(r.fun) and is_hole_free(r.arg)
    return False


# ----------------------------------------------------------------------
# Permutation action


def _act(pi: Permutation, r: Term) -> Term:
    if isinstance(r, AtomTerm):
        return AtomTerm(pi(r.atom))
    if isinstance(r, Const):
        return r
    if isinstance(r, Lam):
        return Lam(pi(r.binder), r.ty, _act(pi, r.body))
    if isinstance(r, App):
        return App(_act(pi, r.fun), _act(pi, r.arg))
    return Unk(r.name, tuple((b, _act(pi, s)) for b, s in r.moderation))


def perm_act(pi: Permutation, r: Term) -> Term:
    """Rename UP atoms in ``r`` by ``pi``; unknowns and their moderation
    domains are left alone."""
    if any(not a.is_up for a in pi.nontriv):
        raise InvalidPermutation(f"{pi} moves a DOWN atom")
    if pi.is_identity():
        return r
    return _act(pi, r)


def perm_act_any(pi: Permutation, r: Term) -> Term:
    """Permutation action for arbitrary ``pi`` on hole-free terms.

    Binders that ``pi`` would send to a DOWN atom are first renamed to a
    fresh UP atom outside ``nontriv(pi)``, so the result stays well formed
    and equals ``pi . r`` up to alpha.
    """
    if pi.is_identity():
        return r
    moved = pi.nontriv
    if all(a.is_up for a in moved):
        return _act(pi, r)

    def go(t):
        if isinstance(t, AtomTerm):
            return AtomTerm(pi(t.atom))
        if isinstance(t, Const):
            return t
        if isinstance(t, App):
            return App(go(t.fun), go(t.arg))
        if isinstance(t, Lam):
            c, body = t.binder, t.body
            if c in moved:
                fresh = fresh_up(free_atoms(body).up_atoms() | moved | {c})
                body = _act(swap(fresh, c), body)
                c = fresh
            return Lam(c, t.ty, go(body))
        raise InvalidPermutation("cannot move DOWN atoms through an unknown")

    return go(r)


# ----------------------------------------------------------------------
# Free atoms and unknowns


def free_atoms(r: Term) -> AtomSet:
    if isinstance(r, AtomTerm):
        return Finite(frozenset([r.atom]))
    if isinstance(r, Const):
        return EMPTY
    if isinstance(r, Lam):
        return free_atoms(r.body).remove(r.binder)
    if isinstance(r, App):
        return free_atoms(r.fun) | free_atoms(r.arg)
    out: AtomSet = CofiniteDown(frozenset(b for b, _ in r.moderation))
    for _, s in r.moderation:
        out = out | free_atoms(s)
    return out


def free_unknowns(r: Term) -> frozenset[str]:
    if isinstance(r, (AtomTerm, Const)):
        return frozenset()
    if isinstance(r, Lam):
        return free_unknowns(r.body)
    if isinstance(r, App):
        return free_unknowns(r.fun) | free_unknowns(r.arg)
    out = {r.name}
    for _, s in r.moderation:
        out |= free_unknowns(s)
    return frozenset(out)


# ----------------------------------------------------------------------
# Alpha-equivalence


def alpha_eq(r: Term, s: Term) -> bool:
    if isinstance(r, AtomTerm) or isinstance(r, Const):
        return r == s
    if isinstance(r, App):
        return isinstance(s, App) and alpha_eq(r.fun, s.fun) and alpha_eq(r.arg, s.arg)
    if isinstance(r, Lam):
        if not isinstance(s, Lam) or r.ty != s.ty:
            return False
        if r.binder == s.binder:
            return alpha_eq(r.body, s.body)
        c = fresh_up(
            free_atoms(r.body).up_atoms() | free_atoms(s.body).up_atoms() | {r.binder, s.binder}
        )
        return alpha_eq(_act(swap(c, r.binder), r.body), _act(swap(c, s.binder), s.body))
    if not isinstance(s, Unk) or r.name != s.name:
        return False
    rm, sm = r.mod_map(), s.mod_map()
    if rm.keys() != sm.keys():
        return False
    return all(alpha_eq(rm[b], sm[b]) for b in rm)


def canonical(r: Term) -> Term:
    """A fixed representative of the alpha-class of ``r``.

    Each binder becomes the least UP atom not free in its lambda, and
    moderations are sorted by domain atom, so ``alpha_eq(r, s)`` iff
    ``canonical(r) == canonical(s)``.
    """
    if isinstance(r, (AtomTerm, Const)):
        return r
    if isinstance(r, App):
        return App(canonical(r.fun), canonical(r.arg))
    if isinstance(r, Lam):
        c = fresh_up(free_atoms(r).up_atoms())
        body = r.body if c == r.binder else _act(swap(c, r.binder), r.body)
        return Lam(c, r.ty, canonical(body))
    return Unk(r.name, tuple(sorted(((b, canonical(s)) for b, s in r.moderation), key=lambda e: e[0])))


# ----------------------------------------------------------------------
# Printing


def show(r: Term) -> str:
    if isinstance(r, AtomTerm):
        return str(r.atom)
    if isinstance(r, Const):
        return r.name
    if isinstance(r, Lam):
        return f"\\{r.binder}:{r.ty}. {show(r.body)}"
    if isinstance(r, App):
        fun = f"({show(r.fun)})" if isinstance(r.fun, Lam) else show(r.fun)
        arg = f"({show(r.arg)})" if isinstance(r.arg, (Lam, App)) else show(r.arg)
        return f"{fun} {arg}"
    if not r.moderation:
        return r.name
    return r.name + "[" + ",".join(f"{b}:={show(s)}" for b, s in r.moderation) + "]"
