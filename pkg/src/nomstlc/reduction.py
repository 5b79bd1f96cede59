"""Beta-reduction and beta-equivalence.

Reduction is leftmost-outermost and also reduces inside moderation ranges,
so normal forms are canonical up to alpha for terms with holes as well.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .subst import subst_one
from .syntax import App, Lam, Signature, Term, Unk, alpha_eq, show
from .typecheck import Context, infer

DEFAULT_BUDGET = 100_000

Path = tuple[str, ...]


class BudgetExceeded(RuntimeError):
    pass


def _contract(redex: App) -> Term:
    lam = redex.fun
    return subst_one(lam.body, lam.binder, redex.arg)


def _step(r: Term, path: Path) -> Optional[tuple[Path, Term]]:
    if isinstance(r, App):
        if isinstance(r.fun, Lam):
            return path, _contract(r)
        hit = _step(r.fun, path + ("fun",))
        if hit is not None:
            return hit[0], App(hit[1], r.arg)
        hit = _step(r.arg, path + ("arg",))
        if hit is not None:
            return hit[0], App(r.fun, hit[1])
        return None
    if isinstance(r, Lam):
        hit = _step(r.body, path + ("body",))
        if hit is not None:
            return hit[0], Lam(r.binder, r.ty, hit[1])
        return None
    if isinstance(r, Unk):
        for i, (b, s) in enumerate(r.moderation):
            hit = _step(s, path + (f"[{b}]",))
            if hit is not None:
                mod = list(r.moderation)
                mod[i] = (b, hit[1])
                return hit[0], Unk(r.name, tuple(mod))
    return None


def beta_step(r: Term) -> Optional[Term]:
    """Contract the leftmost-outermost redex, or ``None`` if ``r`` is normal."""
    hit = _step(r, ())
    return None if hit is None else hit[1]


def is_normal(r: Term) -> bool:
    return _step(r, ()) is None


def one_step_reducts(r: Term) -> Iterator[Term]:
    """Every term obtained by contracting exactly one redex of ``r``."""
    if isinstance(r, App):
        if isinstance(r.fun, Lam):
            yield _contract(r)
        for f in one_step_reducts(r.fun):
            yield App(f, r.arg)
        for a in one_step_reducts(r.arg):
            yield App(r.fun, a)
    elif isinstance(r, Lam):
        for b in one_step_reducts(r.body):
            yield Lam(r.binder, r.ty, b)
    elif isinstance(r, Unk):
        for i, (b, s) in enumerate(r.moderation):
            for s2 in one_step_reducts(s):
                mod = list(r.moderation)
                mod[i] = (b, s2)
                yield Unk(r.name, tuple(mod))


@dataclass
class ReductionTrace:
    start: Term
    steps: list[tuple[Path, Term]] = field(default_factory=list)

    @property
    def result(self) -> Term:
        return self.steps[-1][1] if self.steps else self.start

    def lines(self) -> list[str]:
        out = [show(self.start)]
        for path, t in self.steps:
            out.append(f"  --> {show(t)}    [at {'/'.join(path) or '<root>'}]")
        return out


def reduce_to_normal(r: Term, budget: int = DEFAULT_BUDGET, trace: Optional[ReductionTrace] = None) -> Term:
    """Iterate :func:`beta_step` without any typing precondition."""
    for _ in range(budget):
        hit = _step(r, ())
        if hit is None:
            return r
        r = hit[1]
        if trace is not None:
            trace.steps.append(hit)
    if is_normal(r):
        return r
    raise BudgetExceeded(f"no normal form within {budget} steps")


def normalize(sig: Signature, ctx: Context, r: Term, budget: int = DEFAULT_BUDGET) -> Term:
    infer(sig, ctx, r)
    return reduce_to_normal(r, budget)


def trace_normalize(sig: Signature, ctx: Context, r: Term, budget: int = DEFAULT_BUDGET) -> ReductionTrace:
    infer(sig, ctx, r)
    tr = ReductionTrace(r)
    reduce_to_normal(r, budget, tr)
    return tr


def beta_eq(sig: Signature, ctx: Context, r: Term, s: Term, budget: int = DEFAULT_BUDGET) -> bool:
    rt = infer(sig, ctx, r)
    st = infer(sig, ctx, s)
    if rt != st:
        raise ValueError(f"cannot compare terms of different types {rt} and {st}")
    return alpha_eq(reduce_to_normal(r, budget), reduce_to_normal(s, budget))
