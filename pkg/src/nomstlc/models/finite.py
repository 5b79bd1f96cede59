"""Table-driven finite models read from a small text format.

A model file is a sequence of sections, each opened by a header such as
``[subst]``.  Every row is a ``|``-separated tuple; ``--`` starts a comment.
The grammar is documented in ``docs/formats.md``.  Any operation whose
cell is absent raises :class:`UndefinedCell`, so a model may be partial.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Union

from ..atoms import Atom, AtomSet, Permutation, atomset, swaps
from ..concrete import ParseError, parse_atom, parse_context, parse_type
from ..syntax import Arrow, Signature, SimpleType, base_names
from ..typecheck import Context
from .base import AxiomInstance, ModelInterface, SamplingPlan, UndefinedCell, _check_pairs

SECTIONS = ("carriers", "atoms", "consts", "abs", "app", "subst", "perm", "supp")
_ARITY = {"carriers": 3, "atoms": 3, "consts": 3, "abs": 4, "app": 3, "subst": 4, "perm": 3, "supp": 2}
_LABEL = re.compile(r"[A-Za-z0-9_]+\Z")
_HEADER = re.compile(r"\[\s*([a-z]+)\s*\]\Z")


class ModelFileError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, path=None):
        where = f"{path or '<model>'}:{line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


CarrierKey = tuple[frozenset, SimpleType]


def _ctx_key(ctx: Context) -> frozenset:
    return frozenset(ctx.atoms.items())


@dataclass
class FiniteModel(ModelInterface):
    carriers: dict[CarrierKey, frozenset[str]] = field(default_factory=dict)
    atoms: dict[tuple[Atom, SimpleType], str] = field(default_factory=dict)
    consts: dict[str, tuple[SimpleType, str]] = field(default_factory=dict)
    abs_table: dict[tuple[Atom, SimpleType, str], str] = field(default_factory=dict)
    app_table: dict[tuple[str, str], str] = field(default_factory=dict)
    subst_table: dict[tuple[str, Atom, str], str] = field(default_factory=dict)
    perm_table: dict[tuple[Atom, Atom], dict[str, str]] = field(default_factory=dict)
    supports: dict[str, AtomSet] = field(default_factory=dict)
    path: Optional[str] = None

    def __post_init__(self):
        bases = set()
        for (_, ty) in self.carriers:
            bases |= base_names(ty)
        for (_, ty) in self.atoms:
            bases |= base_names(ty)
        for ty, _ in self.consts.values():
            bases |= base_names(ty)
        self.signature = (
            Signature(frozenset(bases), {c: ty for c, (ty, _) in self.consts.items()}) if bases else None
        )
        self.missing = self._missing_cells()

    # ------------------------------------------------------------------
    # structure

    @property
    def elements(self) -> frozenset[str]:
        return frozenset().union(*self.carriers.values()) if self.carriers else frozenset()

    @property
    def partial(self) -> bool:
        return bool(self.missing)

    def carrier(self, ctx: Context, ty: SimpleType) -> frozenset[str]:
        """Elements at ``(ctx, ty)``: the declared carriers at ``ty`` whose
        context is contained in ``ctx``.  Unknown typings are ignored."""
        key = _ctx_key(ctx)
        out = set()
        for (delta, t), labels in self.carriers.items():
            if t == ty and delta <= key:
                out |= labels
        return frozenset(out)

    def _types(self) -> set[SimpleType]:
        return {ty for (_, ty) in self.carriers}

    def _missing_cells(self) -> list[str]:
        out = []
        types = self._types()
        for phi in sorted(types, key=str):
            for psi in sorted(types, key=str):
                if Arrow(psi, phi) not in types:
                    out.append(f"no carrier at type {Arrow(psi, phi)}")
        for (delta, phi), labels in sorted(self.carriers.items(), key=str):
            ctx = Context(dict(delta))
            for a, psi in sorted(delta):
                if (a, psi) not in self.atoms:
                    out.append(f"atom {a}:{psi}")
                args = self.carrier(ctx.without(a), psi) | self.carrier(ctx, psi)
                for z in sorted(labels):
                    for x in sorted(args):
                        if (z, a, x) not in self.subst_table:
                            out.append(f"subst {z}[{a}:={x}]")
            if isinstance(phi, Arrow):
                for f in sorted(labels):
                    for x in sorted(self.carrier(ctx, phi.dom)):
                        if (f, x) not in self.app_table:
                            out.append(f"app {f} {x}")
        return out

    # ------------------------------------------------------------------
    # model operations

    def contains(self, ctx, ty, x):
        return x in self.carrier(ctx, ty)

    def atom_elem(self, a, ty):
        try:
            return self.atoms[a, ty]
        except KeyError:
            raise UndefinedCell(f"no element for atom {a}:{ty}") from None

    def const_elem(self, name):
        try:
            return self.consts[name][1]
        except KeyError:
            raise UndefinedCell(f"no element for constant {name}") from None

    def abs_elem(self, a, ty, x):
        try:
            return self.abs_table[a, ty, x]
        except KeyError:
            raise UndefinedCell(f"no abstraction [{a}:{ty}]{x}") from None

    def app_elem(self, x, y):
        try:
            return self.app_table[x, y]
        except KeyError:
            raise UndefinedCell(f"no application {x} {y}") from None

    def subst_elem(self, x, a, y):
        try:
            return self.subst_table[x, a, y]
        except KeyError:
            raise UndefinedCell(f"no substitution {x}[{a}:={y}]") from None

    def supp(self, x) -> AtomSet:
        return self.supports.get(x, atomset())

    def perm_elem(self, pi: Permutation, x):
        moved = set(pi.nontriv)
        if not any(a in moved for a in self.supp(x).members):
            return x
        for a, b in reversed(swaps(pi)):
            key = (a, b) if (a, b) in self.perm_table else (b, a)
            try:
                x = self.perm_table[key][x]
            except KeyError:
                raise UndefinedCell(f"no permutation entry ({a} {b}) {x}") from None
        return x

    def sim_subst(self, x, pairs, *, avoid=(), order=None, ctx=None):
        # With no b_i in the support of another y_j the sequential cells
        # already give the simultaneous result, and no fresh atoms are
        # needed; a finite table has no room for them.
        pairs = list(pairs)
        doms = [b for b, _ in pairs]
        independent = len(set(doms)) == len(doms) and all(
            b not in self.supp(y) for i, (b, _) in enumerate(pairs) for j, (_, y) in enumerate(pairs) if i != j
        )
        if not independent:
            return super().sim_subst(x, pairs, avoid=avoid, order=order, ctx=ctx)
        _check_pairs(pairs, ctx)
        z = x
        for i in (range(len(pairs)) if order is None else order):
            z = self.subst_elem(z, pairs[i][0], pairs[i][1])
        return z

    # ------------------------------------------------------------------
    # exhaustive axiom cells

    def _subst_args(self) -> list[tuple[Atom, str]]:
        return sorted({(a, x) for (_, a, x) in self.subst_table})

    def _atom_type(self, a: Atom) -> list[SimpleType]:
        return sorted({ty for (b, ty) in self.atoms if b == a}, key=str)

    def axiom_instances(self, plan: SamplingPlan) -> Iterator[AxiomInstance]:
        s = self.subst_elem
        for (a, ty), label in sorted(self.atoms.items(), key=str):
            for b, x in self._subst_args():
                if b == a:
                    yield AxiomInstance("Suba", {"a": str(a), "x": x}, lambda l=label, a=a, x=x: s(l, a, x), lambda x=x: x)
        for z in sorted(self.elements):
            for a, x in self._subst_args():
                if a not in self.supp(z):
                    yield AxiomInstance("Sub#", {"z": z, "a": str(a), "x": x}, lambda z=z, a=a, x=x: s(z, a, x), lambda z=z: z)
        for (f, y), r in sorted(self.app_table.items()):
            for a, x in self._subst_args():
                yield AxiomInstance(
                    "SubApp", {"z'": f, "z": y, "a": str(a), "x": x},
                    lambda r=r, a=a, x=x: s(r, a, x),
                    lambda f=f, y=y, a=a, x=x: self.app_elem(s(f, a, x), s(y, a, x)),
                )
        for (c, ty, z), r in sorted(self.abs_table.items(), key=str):
            for a, x in self._subst_args():
                if c == a or c in self.supp(x):
                    continue
                yield AxiomInstance(
                    "Subλ", {"c": str(c), "z": z, "a": str(a), "x": x},
                    lambda r=r, a=a, x=x: s(r, a, x),
                    lambda c=c, ty=ty, z=z, a=a, x=x: self.abs_elem(c, ty, s(z, a, x)),
                )
        for z in sorted(self.elements):
            for a in sorted({a for (_, a, _) in self.subst_table}):
                for ty in self._atom_type(a):
                    yield AxiomInstance(
                        "SubId", {"z": z, "a": str(a)},
                        lambda z=z, a=a, ty=ty: s(z, a, self.atom_elem(a, ty)), lambda z=z: z,
                    )

    # ------------------------------------------------------------------

    def check_invariants(self) -> list[str]:
        """Violations of the structural conditions a model must meet."""
        out = []
        for (delta, ty), labels in sorted(self.carriers.items(), key=str):
            dom = {a for a, _ in delta}
            for x in sorted(labels):
                extra = [a for a in self.supp(x).members if a not in dom]
                if extra:
                    out.append(f"supp({x}) has {sorted(map(str, extra))} outside its context")
        keys = sorted(self.carriers, key=str)
        for k1, k2 in itertools.combinations(keys, 2):
            if k1[1] != k2[1]:
                continue
            both = self.carriers[k1] & self.carriers[k2]
            meet = Context(dict(k1[0] & k2[0]))
            for x in sorted(both - self.carrier(meet, k1[1])):
                out.append(f"{x} lies in two carriers at {k1[1]} but not in their intersection")
        for (a, b), table in sorted(self.perm_table.items()):
            sw = Permutation.from_mapping({a: b, b: a})
            for (c, ty), label in self.atoms.items():
                if c in (a, b) and (sw(c), ty) in self.atoms and label in table:
                    if table[label] != self.atoms[sw(c), ty]:
                        out.append(f"({a} {b}) does not send {label} to the element of {sw(c)}")
            for (x, y), r in self.app_table.items():
                if all(v in table for v in (x, y, r)) and (table[x], table[y]) in self.app_table:
                    if self.app_table[table[x], table[y]] != table[r]:
                        out.append(f"({a} {b}) does not commute with application {x} {y}")
        return out

    def show(self, x):
        return str(x)


# ----------------------------------------------------------------------
# file format


def _rows(text: str, path):
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("--", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            section = m.group(1)
            if section not in SECTIONS:
                raise ModelFileError(f"unknown section [{section}]", lineno, path)
            continue
        if section is None:
            raise ModelFileError("row before any section header", lineno, path)
        fields = [f.strip() for f in line.split("|")]
        if len(fields) != _ARITY[section]:
            raise ModelFileError(
                f"[{section}] rows have {_ARITY[section]} fields, found {len(fields)}", lineno, path
            )
        yield section, lineno, fields


def _labels(text: str, lineno, path) -> list[str]:
    out = text.split()
    for lab in out:
        if not _LABEL.match(lab):
            raise ModelFileError(f"bad element label {lab!r}", lineno, path)
    return out


def _one_label(text, lineno, path) -> str:
    labs = _labels(text, lineno, path)
    if len(labs) != 1:
        raise ModelFileError(f"expected one element label, found {text!r}", lineno, path)
    return labs[0]


def parse_finite_model(text: str, path=None) -> FiniteModel:
    carriers: dict = {}
    atoms, consts, abs_t, app_t, subst_t, supports = {}, {}, {}, {}, {}, {}
    perm: dict = {}
    refs: list[tuple[str, int]] = []

    def lab(s, n):
        x = _one_label(s, n, path)
        refs.append((x, n))
        return x

    for section, n, f in _rows(text, path):
        try:
            if section == "carriers":
                key = (_ctx_key(parse_context(f[0])), parse_type(f[1]))
                carriers[key] = carriers.get(key, frozenset()) | frozenset(_labels(f[2], n, path))
            elif section == "atoms":
                atoms[parse_atom(f[0]), parse_type(f[1])] = lab(f[2], n)
            elif section == "consts":
                consts[f[0]] = (parse_type(f[1]), lab(f[2], n))
            elif section == "abs":
                a = parse_atom(f[0])
                if not a.is_up:
                    raise ModelFileError(f"abstraction over DOWN atom {a}", n, path)
                abs_t[a, parse_type(f[1]), lab(f[2], n)] = lab(f[3], n)
            elif section == "app":
                app_t[lab(f[0], n), lab(f[1], n)] = lab(f[2], n)
            elif section == "subst":
                subst_t[lab(f[0], n), parse_atom(f[1]), lab(f[2], n)] = lab(f[3], n)
            elif section == "perm":
                pair = [parse_atom(t) for t in f[0].split()]
                if len(pair) != 2 or pair[0] == pair[1] or pair[0].sort != pair[1].sort:
                    raise ModelFileError("a [perm] row starts with two distinct atoms of one sort", n, path)
                a, b = sorted(pair)
                perm.setdefault((a, b), {})[lab(f[1], n)] = lab(f[2], n)
            elif section == "supp":
                x = lab(f[0], n)
                supports[x] = atomset(parse_atom(t) for t in f[1].split())
        except ParseError as err:
            raise ModelFileError(err.message, n, path) from None

    declared = frozenset().union(*carriers.values()) if carriers else frozenset()
    for x, n in refs:
        if x not in declared:
            raise ModelFileError(f"element {x} is not in any carrier", n, path)
    for (a, b), table in perm.items():
        if sorted(table) != sorted(table.values()):
            raise ModelFileError(f"permutation ({a} {b}) is not a bijection on its elements", None, path)
        for x, y in table.items():
            if x != y and not supports.get(x, atomset()).members:
                raise ModelFileError(f"({a} {b}) moves {x}, whose support is empty", None, path)
    return FiniteModel(carriers, atoms, consts, abs_t, app_t, subst_t, perm, supports, path=path)


def load_finite_model(path: Union[str, Path]) -> FiniteModel:
    p = Path(path)
    return parse_finite_model(p.read_text(encoding="utf-8"), str(p))


def bundled_model_path(name: str = "sub_fresh_counterexample") -> Path:
    return Path(__file__).resolve().parent.parent / "data" / f"{name}.model"
