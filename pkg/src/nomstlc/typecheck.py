"""Contexts and type synthesis for terms with holes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .atoms import Atom, Permutation, fresh_up, swap
from .syntax import (
    App,
    Arrow,
    AtomTerm,
    Const,
    Lam,
    Signature,
    SimpleType,
    Term,
    _act,
    base_names,
    free_atoms,
    show,
)


@dataclass(frozen=True, eq=False)
class Context:
    """Typings for atoms and unknowns.  Functional by construction."""

    atoms: Mapping[Atom, SimpleType] = field(default_factory=dict)
    unknowns: Mapping[str, SimpleType] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "atoms", dict(self.atoms))
        object.__setattr__(self, "unknowns", dict(self.unknowns))

    @classmethod
    def of(cls, typings: Mapping[Union[Atom, str], SimpleType]) -> "Context":
        atoms = {k: v for k, v in typings.items() if isinstance(k, Atom)}
        unknowns = {k: v for k, v in typings.items() if isinstance(k, str)}
        return cls(atoms, unknowns)

    def __eq__(self, other):
        if not isinstance(other, Context):
            return NotImplemented
        return self.atoms == other.atoms and self.unknowns == other.unknowns

    def __hash__(self):
        return hash((frozenset(self.atoms.items()), frozenset(self.unknowns.items())))

    def dom(self) -> frozenset:
        return frozenset(self.atoms) | frozenset(self.unknowns)

    def extend(self, key: Union[Atom, str], ty: SimpleType) -> "Context":
        if key in self.atoms or key in self.unknowns:
            raise ValueError(f"{key} is already typed in the context")
        return self.override(key, ty)

    def override(self, key: Union[Atom, str], ty: SimpleType) -> "Context":
        if isinstance(key, Atom):
            return Context({**self.atoms, key: ty}, self.unknowns)
        return Context(self.atoms, {**self.unknowns, key: ty})

    def without(self, key: Union[Atom, str]) -> "Context":
        atoms = {a: t for a, t in self.atoms.items() if a != key}
        unknowns = {x: t for x, t in self.unknowns.items() if x != key}
        return Context(atoms, unknowns)

    def atoms_only(self) -> "Context":
        return Context(self.atoms)

    def permute(self, pi: Permutation) -> "Context":
        return Context({pi(a): t for a, t in self.atoms.items()}, self.unknowns)

    def __or__(self, other: "Context") -> "Context":
        for k in other.atoms:
            if k in self.atoms and self.atoms[k] != other.atoms[k]:
                raise ValueError(f"conflicting typings for {k}")
        return Context({**self.atoms, **other.atoms}, {**self.unknowns, **other.unknowns})

    def __str__(self):
        items = [f"{a}:{t}" for a, t in sorted(self.atoms.items())]
        items += [f"{x}:{t}" for x, t in sorted(self.unknowns.items())]
        return "{" + ", ".join(items) + "}"


EMPTY_CONTEXT = Context()


class TypingError(Exception):
    """Base class for typing failures.

    ``path`` locates the offending subterm from the root, as a tuple of
    steps such as ``"fun"``, ``"arg"``, ``"body"`` or ``"['b]"``.
    """

    rule = "?"

    def __init__(self, message: str, term: Term, path: tuple[str, ...] = ()):
        super().__init__(message)
        self.message = message
        self.term = term
        self.path = path

    def __str__(self):
        where = "/".join(self.path) or "<root>"
        return f"{type(self).__name__} at {where}: {self.message} (in {show(self.term)})"


class UnboundAtom(TypingError):
    rule = "V"


class UndeclaredConstant(TypingError):
    rule = "C"


class UndeclaredBaseType(TypingError):
    rule = "L"


class AppMismatch(TypingError):
    rule = "A"


class UnboundUnknown(TypingError):
    rule = "Meta"


class UntypedModerationDomain(TypingError):
    rule = "Meta"


class ModerationRangeMismatch(TypingError):
    rule = "Meta"


class UnexpectedUnknown(TypingError):
    rule = "Meta"


def infer(sig: Signature, ctx: Context, r: Term, *, holes: bool = True) -> SimpleType:
    """Synthesize the unique type of ``r`` in ``ctx``, or raise a
    :class:`TypingError`.  With ``holes=False`` any unknown is rejected."""

    def check_type(ty, t, path):
        missing = base_names(ty) - sig.base_types
        if missing:
            raise UndeclaredBaseType(f"base types {sorted(missing)} are not declared", t, path)

    def go(ctx: Context, t: Term, path: tuple[str, ...]) -> SimpleType:
        if isinstance(t, AtomTerm):
            try:
                return ctx.atoms[t.atom]
            except KeyError:
                raise UnboundAtom(f"atom {t.atom} has no typing", t, path) from None
        if isinstance(t, Const):
            try:
                return sig.constants[t.name]
            except KeyError:
                raise UndeclaredConstant(f"constant {t.name} is not declared", t, path) from None
        if isinstance(t, Lam):
            check_type(t.ty, t, path)
            c, body = t.binder, t.body
            if c in ctx.atoms:
                fresh = fresh_up(set(ctx.atoms) | free_atoms(body).up_atoms() | {c})
                body = _act(swap(fresh, c), body)
                c = fresh
            return Arrow(t.ty, go(ctx.override(c, t.ty), body, path + ("body",)))
        if isinstance(t, App):
            fty = go(ctx, t.fun, path + ("fun",))
            aty = go(ctx, t.arg, path + ("arg",))
            if not isinstance(fty, Arrow):
                raise AppMismatch(f"applying a term of non-function type {fty}", t, path)
            if fty.dom != aty:
                raise AppMismatch(f"function expects {fty.dom} but argument has {aty}", t, path)
            return fty.cod
        if not holes:
            raise UnexpectedUnknown(f"unknown {t.name} in a hole-free position", t, path)
        try:
            ty = ctx.unknowns[t.name]
        except KeyError:
            raise UnboundUnknown(f"unknown {t.name} has no typing", t, path) from None
        for b, s in t.moderation:
            step = path + (f"[{b}]",)
            if b not in ctx.atoms:
                raise UntypedModerationDomain(f"moderated atom {b} has no typing", t, step)
            sty = go(ctx, s, step)
            if sty != ctx.atoms[b]:
                raise ModerationRangeMismatch(
                    f"{b} has type {ctx.atoms[b]} but is replaced by a term of type {sty}", t, step
                )
        return ty

    return go(ctx, r, ())


def diagnose(sig: Signature, ctx: Context, r: Term, ty: SimpleType, *, holes: bool = True) -> Optional[str]:
    """``None`` when ``ctx |- r : ty`` holds, otherwise a one-line reason."""
    try:
        got = infer(sig, ctx, r, holes=holes)
    except TypingError as err:
        return str(err)
    if got != ty:
        return f"term has type {got}, expected {ty}"
    return None


def check(sig: Signature, ctx: Context, r: Term, ty: SimpleType, *, holes: bool = True) -> bool:
    return diagnose(sig, ctx, r, ty, holes=holes) is None


def typable(sig: Signature, ctx: Context, r: Term, *, holes: bool = True) -> bool:
    try:
        infer(sig, ctx, r, holes=holes)
    except TypingError:
        return False
    return True
