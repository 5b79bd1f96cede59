"""Seeded random generation of contexts and well-typed terms.

Used by the term-model axiom sampler and by the property tests.  Generated
terms are typed by construction; callers that need a hard size bound
should filter with :func:`nomstlc.syntax.size`.
"""
from __future__ import annotations

import random
from typing import Optional

from .atoms import Atom, Permutation, Sort, compose, fresh_up, swap
from .syntax import App, Arrow, AtomTerm, Base, Const, Lam, Signature, SimpleType, Term, Unk
from .syntax import size as term_size
from .typecheck import Context

UNKNOWN_NAMES = ("X", "Y", "Z", "W")


def default_signature() -> Signature:
    t = Base("t")
    return Signature(
        frozenset(["t"]),
        {"C": t, "D": t, "F": Arrow(t, t), "G": Arrow(t, Arrow(t, t))},
    )


class TermGenerator:
    def __init__(
        self,
        sig: Signature,
        rng: Optional[random.Random] = None,
        *,
        max_index: int = 8,
        holes: bool = True,
        redex_rate: float = 0.25,
    ):
        self.sig = sig
        self.rng = rng or random.Random(0)
        self.max_index = max_index
        self.holes = holes
        self.redex_rate = redex_rate
        bases = [Base(n) for n in sorted(sig.base_types)]
        self.bases = bases
        self.types = bases + [Arrow(b, c) for b in bases for c in bases]

    # ------------------------------------------------------------------

    def type_(self, depth: int = 2) -> SimpleType:
        if depth <= 0 or self.rng.random() < 0.55:
            return self.rng.choice(self.bases)
        return Arrow(self.type_(depth - 1), self.type_(depth - 1))

    def atom(self, sort: Sort) -> Atom:
        return Atom(sort, self.rng.randint(0, self.max_index))

    def context(self, n_down: int = 3, n_up: int = 2, n_unknowns: int = 2) -> Context:
        atoms = {}
        for b in self.bases:
            # every base type gets an inhabitant
            atoms[self.atom(Sort.DOWN)] = b
        for _ in range(n_down):
            atoms[self.atom(Sort.DOWN)] = self.type_(1)
        for _ in range(n_up):
            atoms[self.atom(Sort.UP)] = self.type_(1)
        unknowns = {}
        if self.holes:
            for x in UNKNOWN_NAMES[:n_unknowns]:
                unknowns[x] = self.type_(1)
        return Context(atoms, unknowns)

    def up_permutation(self, n_swaps: int = 3) -> Permutation:
        pi = Permutation()
        for _ in range(n_swaps):
            a, b = self.atom(Sort.UP), self.atom(Sort.UP)
            if a != b:
                pi = compose(swap(a, b), pi)
        return pi

    # ------------------------------------------------------------------

    def _leaves(self, ctx: Context, ty: SimpleType, allow_unknowns: bool):
        out: list = [AtomTerm(a) for a, t in sorted(ctx.atoms.items()) if t == ty]
        out += [Const(c) for c, t in sorted(self.sig.constants.items()) if t == ty]
        if allow_unknowns:
            out += [Unk(x) for x, t in sorted(ctx.unknowns.items()) if t == ty]
        return out

    def _binder(self, ctx: Context) -> Atom:
        for _ in range(4):
            a = self.atom(Sort.UP)
            if a not in ctx.atoms:
                return a
        return fresh_up(ctx.atoms)

    def term(self, ctx: Context, ty: SimpleType, size: int = 10) -> Term:
        """A term ``r`` with ``ctx |- r : ty`` of roughly ``size`` nodes."""
        rng = self.rng
        allow_unk = self.holes and bool(ctx.unknowns)
        leaves = self._leaves(ctx, ty, allow_unk)
        if size <= 1 or (leaves and rng.random() < 1.0 / size):
            if leaves:
                return self._decorate(ctx, rng.choice(leaves), size)
            if isinstance(ty, Arrow):
                return self._lam(ctx, ty, 1)
            return self._app(ctx, ty, 2)
        choices = ["app", "redex"]
        if isinstance(ty, Arrow):
            choices += ["lam", "lam"]
        if allow_unk and any(t == ty for t in ctx.unknowns.values()):
            choices.append("unk")
        pick = rng.choice(choices)
        if pick == "redex" and rng.random() > self.redex_rate * 2:
            pick = "app"
        if pick == "lam":
            return self._lam(ctx, ty, size)
        if pick == "unk":
            x = rng.choice(sorted(x for x, t in ctx.unknowns.items() if t == ty))
            return self._moderate(ctx, Unk(x), size - 1)
        if pick == "redex":
            aty = rng.choice(self.types)
            a = self._binder(ctx)
            body = self.term(ctx.override(a, aty), ty, max(1, size // 2))
            arg = self.term(ctx, aty, max(1, size - size // 2 - 2))
            return App(Lam(a, aty, body), arg)
        return self._app(ctx, ty, size)

    def _lam(self, ctx, ty, size):
        a = self._binder(ctx)
        return Lam(a, ty.dom, self.term(ctx.override(a, ty.dom), ty.cod, size - 1))

    def _app(self, ctx, ty, size):
        aty = self.rng.choice(self.bases if size < 4 else self.types)
        left = max(1, (size - 1) // 2)
        fun = self.term(ctx, Arrow(aty, ty), left)
        arg = self.term(ctx, aty, max(1, size - 1 - left))
        return App(fun, arg)

    def _decorate(self, ctx, leaf, size):
        if isinstance(leaf, Unk) and size > 2 and self.rng.random() < 0.6:
            return self._moderate(ctx, leaf, size - 1)
        return leaf

    def _moderate(self, ctx: Context, x: Unk, size: int) -> Unk:
        downs = sorted(a for a in ctx.atoms if a.is_down)
        if not downs or size <= 1:
            return x
        k = self.rng.randint(1, min(2, len(downs)))
        chosen = sorted(self.rng.sample(downs, k))
        per = max(1, size // k)
        return Unk(x.name, tuple((b, self.term(ctx, ctx.atoms[b], per)) for b in chosen))

    # ------------------------------------------------------------------

    def typed(self, ctx: Context, size: int = 10, max_size: int = 20, ty: Optional[SimpleType] = None):
        """``(term, type)`` with the term no larger than ``max_size``."""
        for _ in range(200):
            t = ty if ty is not None else self.type_(1)
            r = self.term(ctx, t, self.rng.randint(1, size))
            if term_size(r) <= max_size:
                return r, t
        raise RuntimeError("could not generate a small enough term")
