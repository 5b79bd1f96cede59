"""The syntactic model: beta-classes of hole-free terms.

An element is stored as its beta-normal form in canonical alpha-form, so
element equality is structural and the support is the free-atom set of
that representative.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator

from ..atoms import Atom, AtomSet
from ..gen import TermGenerator
from ..reduction import DEFAULT_BUDGET, reduce_to_normal
from ..subst import subst_one
from ..syntax import App, Arrow, AtomTerm, Const, Lam, Signature, SimpleType, Term, canonical, free_atoms, perm_act_any, show
from ..typecheck import EMPTY_CONTEXT, Context, TypingError, infer
from .base import AxiomInstance, ModelInterface, SamplingPlan


@dataclass(frozen=True)
class TermModelElement:
    type: SimpleType
    normal_form: Term
    # where the element was built; not part of its identity
    context: Context = field(default=EMPTY_CONTEXT, compare=False)

    def __str__(self):
        return show(self.normal_form)


class TermModel(ModelInterface):
    def __init__(self, sig: Signature, budget: int = DEFAULT_BUDGET):
        self.signature = sig
        self.budget = budget

    def _make(self, ty: SimpleType, r: Term, ctx: Context = EMPTY_CONTEXT) -> TermModelElement:
        return TermModelElement(ty, canonical(reduce_to_normal(r, self.budget)), ctx)

    def element(self, ctx: Context, r: Term) -> TermModelElement:
        """The class of ``r``; it must be hole-free and typed in ``ctx``."""
        try:
            ty = infer(self.signature, ctx.atoms_only(), r, holes=False)
        except TypingError as err:
            raise ValueError(f"not a typed hole-free representative: {err}") from None
        return self._make(ty, r, ctx)

    # model operations

    def contains(self, ctx, ty, x):
        if not isinstance(x, TermModelElement) or x.type != ty:
            return False
        try:
            return infer(self.signature, ctx.atoms_only(), x.normal_form, holes=False) == ty
        except TypingError:
            return False

    def atom_elem(self, a, ty):
        return TermModelElement(ty, AtomTerm(a))

    def const_elem(self, name):
        return TermModelElement(self.signature.constants[name], Const(name))

    def abs_elem(self, a, ty, x):
        return TermModelElement(Arrow(ty, x.type), canonical(Lam(a, ty, x.normal_form)))

    def app_elem(self, x, y):
        if not isinstance(x.type, Arrow) or x.type.dom != y.type:
            raise ValueError(f"cannot apply an element of type {x.type} to one of type {y.type}")
        return self._make(x.type.cod, App(x.normal_form, y.normal_form))

    def subst_elem(self, x, a, y):
        return self._make(x.type, subst_one(x.normal_form, a, y.normal_form))

    def perm_elem(self, pi, x):
        return TermModelElement(x.type, canonical(perm_act_any(pi, x.normal_form)))

    def supp(self, x) -> AtomSet:
        return free_atoms(x.normal_form)

    def show(self, x):
        return show(x.normal_form)

    # sampling

    def generator(self, plan: SamplingPlan, salt: int = 0) -> TermGenerator:
        rng = random.Random(plan.seed * 1_000_003 + salt)
        return TermGenerator(self.signature, rng, max_index=plan.max_index, holes=False)

    def axiom_instances(self, plan: SamplingPlan) -> Iterator[AxiomInstance]:
        for salt, axiom in enumerate(("Suba", "Sub#", "SubApp", "Subλ", "SubId")):
            g = self.generator(plan, salt)
            for _ in range(plan.samples):
                yield getattr(self, "_sample_" + _SAMPLERS[axiom])(g, plan)

    def _pick_atom(self, g: TermGenerator, ctx: Context) -> Atom:
        return g.rng.choice(sorted(ctx.atoms))

    def _term(self, g, ctx, ty, plan):
        r, _ = g.typed(ctx, size=plan.max_size // 2, max_size=plan.max_size, ty=ty)
        return self.element(ctx, r)

    def _sample_suba(self, g, plan):
        ctx = g.context()
        a = self._pick_atom(g, ctx)
        ty = ctx.atoms[a]
        x = self._term(g, ctx.without(a), ty, plan)
        return AxiomInstance(
            "Suba", {"a": str(a), "x": str(x)},
            lambda: self.subst_elem(self.atom_elem(a, ty), a, x), lambda: x,
        )

    def _sample_subfresh(self, g, plan):
        while True:
            ctx = g.context()
            z = self._term(g, ctx, g.type_(1), plan)
            fresh = sorted(a for a in ctx.atoms if a not in self.supp(z))
            if fresh:
                break
        a = g.rng.choice(fresh)
        x = self._term(g, ctx.without(a), ctx.atoms[a], plan)
        return AxiomInstance(
            "Sub#", {"z": str(z), "a": str(a), "x": str(x)},
            lambda: self.subst_elem(z, a, x), lambda: z,
        )

    def _sample_subapp(self, g, plan):
        ctx = g.context()
        a = self._pick_atom(g, ctx)
        dom, cod = g.type_(1), g.type_(1)
        z1 = self._term(g, ctx, Arrow(dom, cod), plan)
        z2 = self._term(g, ctx, dom, plan)
        x = self._term(g, ctx.without(a), ctx.atoms[a], plan)
        return AxiomInstance(
            "SubApp", {"z'": str(z1), "z": str(z2), "a": str(a), "x": str(x)},
            lambda: self.subst_elem(self.app_elem(z1, z2), a, x),
            lambda: self.app_elem(self.subst_elem(z1, a, x), self.subst_elem(z2, a, x)),
        )

    def _sample_sublam(self, g, plan):
        ctx = g.context()
        a = self._pick_atom(g, ctx)
        c = g._binder(ctx)
        chi = g.type_(1)
        z = self._term(g, ctx.override(c, chi), g.type_(1), plan)
        x = self._term(g, ctx.without(a), ctx.atoms[a], plan)
        assert c not in self.supp(x)
        return AxiomInstance(
            "Subλ", {"c": str(c), "z": str(z), "a": str(a), "x": str(x)},
            lambda: self.subst_elem(self.abs_elem(c, chi, z), a, x),
            lambda: self.abs_elem(c, chi, self.subst_elem(z, a, x)),
        )

    def _sample_subid(self, g, plan):
        ctx = g.context()
        a = self._pick_atom(g, ctx)
        z = self._term(g, ctx, g.type_(1), plan)
        return AxiomInstance(
            "SubId", {"z": str(z), "a": str(a)},
            lambda: self.subst_elem(z, a, self.atom_elem(a, ctx.atoms[a])), lambda: z,
        )


_SAMPLERS = {"Suba": "suba", "Sub#": "subfresh", "SubApp": "subapp", "Subλ": "sublam", "SubId": "subid"}
