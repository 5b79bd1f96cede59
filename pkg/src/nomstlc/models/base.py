"""The abstract model interface and the machinery built over it."""
from __future__ import annotations

import abc
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Mapping, Optional, Sequence

from ..atoms import Atom, AtomSet, Permutation, compose, fresh_up, fresh_ups, swap
from ..syntax import App, AtomTerm, Const, Lam, Signature, SimpleType, Term, _act, free_atoms, free_unknowns
from ..typecheck import Context, infer

AXIOMS = ("Suba", "Sub#", "SubApp", "Subλ", "SubId")
OPTIONAL_AXIOMS = frozenset({"SubId"})


class UndefinedCell(LookupError):
    """A partial model has no entry for the requested operation."""


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class SamplingPlan:
    samples: int = 200
    max_size: int = 20
    max_index: int = 8
    seed: int = 0


@dataclass
class AxiomInstance:
    axiom: str
    witness: dict[str, str]
    lhs: Callable[[], Any]
    rhs: Callable[[], Any]


class ModelInterface(abc.ABC):
    """What a model must provide.

    Elements are opaque values compared with ``==``.  ``subst_elem(x, a, y)``
    is ``x[a |-> y]``; ``sim_subst`` is built from it and ``perm_elem``.
    """

    signature: Signature

    @abc.abstractmethod
    def contains(self, ctx: Context, ty: SimpleType, x) -> bool: ...

    @abc.abstractmethod
    def atom_elem(self, a: Atom, ty: SimpleType): ...

    @abc.abstractmethod
    def const_elem(self, name: str): ...

    @abc.abstractmethod
    def abs_elem(self, a: Atom, ty: SimpleType, x): ...

    @abc.abstractmethod
    def app_elem(self, x, y): ...

    @abc.abstractmethod
    def subst_elem(self, x, a: Atom, y): ...

    @abc.abstractmethod
    def perm_elem(self, pi: Permutation, x): ...

    @abc.abstractmethod
    def supp(self, x) -> AtomSet: ...

    @abc.abstractmethod
    def axiom_instances(self, plan: SamplingPlan) -> Iterator[AxiomInstance]: ...

    def show(self, x) -> str:
        return str(x)

    def sim_subst(self, x, pairs: Sequence[tuple[Atom, Any]], *, avoid: Iterable[Atom] = (),
                  order: Optional[Sequence[int]] = None, ctx: Optional[Context] = None):
        """Simultaneous substitution ``x[b1 |-> y1, ..., bn |-> yn]``.

        Each ``bi`` is first swapped with a fresh ``ci`` (outside the supports
        of ``x`` and every ``yi``, the ``bi`` and ``avoid``), then the ``ci``
        are substituted one at a time in ``order``.
        """
        pairs = list(pairs)
        _check_pairs(pairs, ctx)
        if not pairs:
            return x
        taken: AtomSet = self.supp(x)
        for b, y in pairs:
            taken = taken | self.supp(y)
        blocked = set(taken.up_atoms()) | {b for b, _ in pairs} | set(avoid)
        fresh = fresh_ups(len(pairs), blocked)
        pi = Permutation()
        for c, (b, _) in zip(fresh, pairs):
            pi = compose(pi, swap(c, b))
        z = self.perm_elem(pi, x)
        for i in (range(len(pairs)) if order is None else order):
            z = self.subst_elem(z, fresh[i], pairs[i][1])
        return z


def _check_pairs(pairs, ctx):
    doms = [b for b, _ in pairs]
    if len(set(doms)) != len(doms):
        raise ValueError("simultaneous substitution repeats an atom")
    if ctx is not None:
        for b in doms:
            if b not in ctx.atoms:
                raise ValueError(f"substituted atom {b} has no typing in the context")


# ----------------------------------------------------------------------
# Valuations and interpretation


class Valuation(Mapping):
    """Assignment of model elements to unknowns; every value must be
    supported by DOWN atoms only."""

    def __init__(self, model: ModelInterface, entries: Mapping[str, Any] = ()):
        self.model = model
        self._entries = dict(entries)
        for x, v in self._entries.items():
            up = model.supp(v).up_atoms()
            if up:
                raise ModelError(
                    f"value of {x} is supported by UP atoms {sorted(map(str, up))}; "
                    "valuations may only use DOWN atoms"
                )

    def __getitem__(self, x):
        return self._entries[x]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def updated(self, x: str, value) -> "Valuation":
        return Valuation(self.model, {**self._entries, x: value})

    def __repr__(self):
        inner = ", ".join(f"{x}={self.model.show(v)}" for x, v in self._entries.items())
        return f"Valuation({inner})"


def satisfies(model: ModelInterface, ctx: Context, valuation: Mapping[str, Any]) -> bool:
    """``ctx |= valuation``: each typed unknown that is assigned lands in its carrier."""
    return all(
        model.contains(ctx, ty, valuation[x]) for x, ty in ctx.unknowns.items() if x in valuation
    )


def interp(model: ModelInterface, valuation: Mapping[str, Any], ctx: Context, r: Term, *,
           check: bool = True, sig: Optional[Signature] = None):
    """Denotation of ``r`` under ``valuation`` in the context ``ctx``.

    ``sig`` overrides the model's own signature for the typing check.
    """
    if check:
        infer(sig or model.signature, ctx, r)
        missing = sorted(free_unknowns(r) - set(valuation))
        if missing:
            raise ModelError(f"valuation assigns nothing to {', '.join(missing)}")

    def go(ctx: Context, t: Term):
        if isinstance(t, AtomTerm):
            return model.atom_elem(t.atom, ctx.atoms[t.atom])
        if isinstance(t, Const):
            return model.const_elem(t.name)
        if isinstance(t, App):
            return model.app_elem(go(ctx, t.fun), go(ctx, t.arg))
        if isinstance(t, Lam):
            c, body = t.binder, t.body
            if c in ctx.atoms:
                fresh = fresh_up(set(ctx.atoms) | free_atoms(body).up_atoms() | {c})
                body = _act(swap(fresh, c), body)
                c = fresh
            return model.abs_elem(c, t.ty, go(ctx.override(c, t.ty), body))
        pairs = [(b, go(ctx, s)) for b, s in t.moderation]
        return model.sim_subst(valuation[t.name], pairs)

    return go(ctx, r)


def validate(model: ModelInterface, valuation: Mapping[str, Any], ctx: Context, r: Term, s: Term, *,
             sig: Optional[Signature] = None) -> bool:
    """Whether ``ctx |- r = s`` holds under ``valuation``: equal denotations
    inside the carrier of their common type."""
    sig = sig or model.signature
    rt = infer(sig, ctx, r)
    st = infer(sig, ctx, s)
    if rt != st:
        raise ValueError(f"cannot compare terms of different types {rt} and {st}")
    x = interp(model, valuation, ctx, r, sig=sig)
    y = interp(model, valuation, ctx, s, sig=sig)
    return x == y and model.contains(ctx, rt, x)


# ----------------------------------------------------------------------
# Axiom reports


@dataclass
class AxiomResult:
    axiom: str
    checked: int = 0
    skipped: int = 0
    failures: int = 0
    witnesses: list[dict[str, str]] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "fails" if self.failures else "holds-on-samples"

    @property
    def holds(self) -> bool:
        return not self.failures

    @property
    def optional(self) -> bool:
        return self.axiom in OPTIONAL_AXIOMS

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "status": self.status,
            "optional": self.optional,
            "checked": self.checked,
            "skipped": self.skipped,
            "failures": self.failures,
            "witnesses": self.witnesses,
        }


@dataclass
class AxiomReport:
    results: dict[str, AxiomResult]
    partial: bool = False

    def __getitem__(self, axiom: str) -> AxiomResult:
        return self.results[axiom]

    def to_dict(self) -> dict:
        return {"partial": self.partial, "axioms": [r.to_dict() for r in self.results.values()]}

    def lines(self) -> list[str]:
        out = []
        for r in self.results.values():
            tag = " (optional)" if r.optional else ""
            line = f"{r.axiom}{tag} {'holds' if r.holds else 'FAILS'}"
            if r.witnesses:
                line += ", witness " + ", ".join(f"{k}={v}" for k, v in r.witnesses[0].items())
            line += f"  [checked {r.checked}, skipped {r.skipped}, failed {r.failures}]"
            if not r.checked:
                line += "  (no cells)"
            out.append(line)
        if self.partial:
            out.append("model is partial: undefined cells were skipped")
        return out


def check_axioms(model: ModelInterface, plan: Optional[SamplingPlan] = None, *, max_witnesses: int = 10) -> AxiomReport:
    """Evaluate the substitution axioms on every cell the model offers.

    Finite models enumerate their declared tables; sampled models draw
    ``plan.samples`` instances per axiom.  Undefined cells are counted as
    skipped, never as failures.
    """
    plan = plan or SamplingPlan()
    results = {name: AxiomResult(name) for name in AXIOMS}
    for inst in model.axiom_instances(plan):
        res = results[inst.axiom]
        try:
            lhs = inst.lhs()
            rhs = inst.rhs()
        except UndefinedCell:
            res.skipped += 1
            continue
        res.checked += 1
        if lhs != rhs:
            res.failures += 1
            if len(res.witnesses) < max_witnesses:
                res.witnesses.append({**inst.witness, "lhs": model.show(lhs), "rhs": model.show(rhs)})
    return AxiomReport(results, partial=bool(getattr(model, "partial", False)))
