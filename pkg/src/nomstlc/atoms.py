"""Two-sorted atoms, finite permutations and finite/cofinite atom sets.

Atoms come in two sorts.  ``DOWN`` atoms may be captured when an unknown is
instantiated; ``UP`` atoms are the ones a lambda may bind.  Every atom is a
pair ``(sort, index)``; the index is also rendered as a short identifier so
that terms print readably (index 0 is ``a``, 1 is ``b``, ...).
"""
from __future__ import annotations

import enum
import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union


class Sort(enum.IntEnum):
    DOWN = 0
    UP = 1


# Identifier <-> index codec.  Names are [a-z][A-Za-z0-9_']*, enumerated by
# length then lexicographically, which gives a bijection with the naturals.
_FIRST = string.ascii_lowercase
_REST = string.ascii_lowercase + string.ascii_uppercase + string.digits + "_'"


def index_to_name(index: int) -> str:
    if index < 0:
        raise ValueError(f"atom index must be a natural number, got {index}")
    length, block = 1, len(_FIRST)
    while index >= block:
        index -= block
        length += 1
        block *= len(_REST)
    tail_space = len(_REST) ** (length - 1)
    head, rest = divmod(index, tail_space)
    tail = []
    for _ in range(length - 1):
        rest, digit = divmod(rest, len(_REST))
        tail.append(_REST[digit])
    return _FIRST[head] + "".join(reversed(tail))


def name_to_index(name: str) -> int:
    if not name or name[0] not in _FIRST or any(ch not in _REST for ch in name[1:]):
        raise ValueError(f"not an atom name: {name!r}")
    offset, block = 0, len(_FIRST)
    for _ in range(len(name) - 1):
        offset += block
        block *= len(_REST)
    rank = _FIRST.index(name[0])
    for ch in name[1:]:
        rank = rank * len(_REST) + _REST.index(ch)
    return offset + rank


@dataclass(frozen=True, order=True)
class Atom:
    sort: Sort
    index: int

    def __post_init__(self):
        if not isinstance(self.sort, Sort):
            object.__setattr__(self, "sort", Sort(self.sort))
        if self.index < 0:
            raise ValueError(f"atom index must be non-negative, got {self.index}")

    @classmethod
    def up(cls, key: Union[int, str]) -> "Atom":
        return cls(Sort.UP, key if isinstance(key, int) else name_to_index(key))

    @classmethod
    def down(cls, key: Union[int, str]) -> "Atom":
        return cls(Sort.DOWN, key if isinstance(key, int) else name_to_index(key))

    @property
    def is_up(self) -> bool:
        return self.sort is Sort.UP

    @property
    def is_down(self) -> bool:
        return self.sort is Sort.DOWN

    @property
    def name(self) -> str:
        return index_to_name(self.index)

    def __str__(self):
        return self.name if self.is_up else "'" + self.name

    def __repr__(self):
        return f"Atom.{self.sort.name.lower()}({self.name!r})"


# ----------------------------------------------------------------------
# Permutations


@dataclass(frozen=True)
class Permutation:
    """A finitely supported bijection on atoms.

    Stored canonically as the sorted tuple of its non-identity entries, so
    structural equality is permutation equality.
    """

    entries: tuple[tuple[Atom, Atom], ...] = ()

    def __post_init__(self):
        mapping = {a: b for a, b in self.entries if a != b}
        if len(mapping) != len(self.entries) or set(mapping) != set(mapping.values()):
            raise ValueError(f"not a canonical finite bijection: {self.entries!r}")
        object.__setattr__(self, "entries", tuple(sorted(mapping.items())))

    @classmethod
    def from_mapping(cls, mapping: Mapping[Atom, Atom]) -> "Permutation":
        return cls(tuple((a, b) for a, b in mapping.items() if a != b))

    def __call__(self, a: Atom) -> Atom:
        for src, dst in self.entries:
            if src == a:
                return dst
        return a

    def as_dict(self) -> dict[Atom, Atom]:
        return dict(self.entries)

    @property
    def nontriv(self) -> frozenset[Atom]:
        return frozenset(a for a, _ in self.entries)

    def is_identity(self) -> bool:
        return not self.entries

    def __matmul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        return invert(self)

    def __str__(self):
        if not self.entries:
            return "id"
        return "{" + ", ".join(f"{a}->{b}" for a, b in self.entries) + "}"


IDENTITY = Permutation()


def swap(a: Atom, b: Atom) -> Permutation:
    if a == b:
        raise ValueError(f"swap needs two distinct atoms, got {a} twice")
    return Permutation(((a, b), (b, a)))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``compose(p, q)(a) == p(q(a))``."""
    pm, qm = p.as_dict(), q.as_dict()
    out = {}
    for a in set(pm) | set(qm):
        b = qm.get(a, a)
        c = pm.get(b, b)
        if c != a:
            out[a] = c
    return Permutation.from_mapping(out)


def invert(p: Permutation) -> Permutation:
    return Permutation(tuple((b, a) for a, b in p.entries))


def swaps(p: Permutation) -> list[tuple[Atom, Atom]]:
    """Decompose ``p`` into transpositions; ``p`` equals their composition
    taken left to right."""
    m = p.as_dict()
    out = []
    seen = set()
    for start in sorted(m):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        nxt = m[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = m[nxt]
        # (c0 c1 ... ck) = (c0 ck) ... (c0 c2)(c0 c1)
        for c in reversed(cycle[1:]):
            out.append((start, c))
    return out


# ----------------------------------------------------------------------
# Atom sets


class AtomSet:
    """Either a finite set of atoms or a cofinite-on-DOWN set.

    ``CofiniteDown(excluded, extra_up)`` stands for every DOWN atom except
    ``excluded``, plus the finitely many UP atoms ``extra_up``.  Sets that
    are cofinite on UP atoms never arise as free atoms, so they have no
    representation.
    """

    __slots__ = ()

    def __contains__(self, a: Atom) -> bool:  # pragma: no cover - abstract
        raise NotImplementedError

    def up_atoms(self) -> frozenset[Atom]:  # pragma: no cover - abstract
        raise NotImplementedError

    def __or__(self, other: "AtomSet") -> "AtomSet":
        return self.union(other)

    def __and__(self, other: "AtomSet") -> "AtomSet":
        return self.intersection(other)

    def __sub__(self, other: "AtomSet") -> "AtomSet":
        return self.difference(other)

    def __le__(self, other: "AtomSet") -> bool:
        return self.issubset(other)

    def remove(self, a: Atom) -> "AtomSet":
        """Return a copy without ``a``."""
        return self.difference(Finite(frozenset([a])))


@dataclass(frozen=True)
class Finite(AtomSet):
    members: frozenset[Atom] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    def __contains__(self, a):
        return a in self.members

    def __iter__(self) -> Iterator[Atom]:
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def up_atoms(self):
        return frozenset(a for a in self.members if a.is_up)

    def union(self, other):
        if isinstance(other, Finite):
            return Finite(self.members | other.members)
        return other.union(self)

    def intersection(self, other):
        return Finite(frozenset(a for a in self.members if a in other))

    def difference(self, other):
        return Finite(frozenset(a for a in self.members if a not in other))

    def issubset(self, other):
        return all(a in other for a in self.members)

    def permute(self, pi: Permutation) -> "Finite":
        return Finite(frozenset(pi(a) for a in self.members))

    def __str__(self):
        return "{" + ", ".join(str(a) for a in sorted(self.members)) + "}"


@dataclass(frozen=True)
class CofiniteDown(AtomSet):
    excluded: frozenset[Atom] = frozenset()
    extra_up: frozenset[Atom] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "excluded", frozenset(self.excluded))
        object.__setattr__(self, "extra_up", frozenset(self.extra_up))
        if any(not a.is_down for a in self.excluded):
            raise ValueError("CofiniteDown.excluded may only hold DOWN atoms")
        if any(not a.is_up for a in self.extra_up):
            raise ValueError("CofiniteDown.extra_up may only hold UP atoms")

    def __contains__(self, a):
        return a not in self.excluded if a.is_down else a in self.extra_up

    def up_atoms(self):
        return self.extra_up

    def union(self, other):
        if isinstance(other, Finite):
            return CofiniteDown(
                self.excluded - other.members,
                self.extra_up | other.up_atoms(),
            )
        return CofiniteDown(self.excluded & other.excluded, self.extra_up | other.extra_up)

    def intersection(self, other):
        if isinstance(other, Finite):
            return other.intersection(self)
        return CofiniteDown(self.excluded | other.excluded, self.extra_up & other.extra_up)

    def difference(self, other):
        if isinstance(other, Finite):
            return CofiniteDown(
                self.excluded | frozenset(a for a in other.members if a.is_down),
                self.extra_up - other.members,
            )
        # DOWN atoms in self but not in other are the ones other excludes.
        return Finite((other.excluded - self.excluded) | (self.extra_up - other.extra_up))

    def issubset(self, other):
        if isinstance(other, Finite):
            return False
        return other.excluded <= self.excluded and self.extra_up <= other.extra_up

    def permute(self, pi: Permutation) -> "CofiniteDown":
        inv = invert(pi)
        moved = pi.nontriv
        excluded = {a for a in self.excluded if a not in moved}
        extra = {a for a in self.extra_up if a not in moved}
        for a in moved:
            inside = inv(a) in self
            if a.is_down and not inside:
                excluded.add(a)
            elif a.is_up and inside:
                extra.add(a)
        return CofiniteDown(frozenset(excluded), frozenset(extra))

    def __str__(self):
        parts = "DOWN"
        if self.excluded:
            parts += " \\ {" + ", ".join(str(a) for a in sorted(self.excluded)) + "}"
        if self.extra_up:
            parts += " + {" + ", ".join(str(a) for a in sorted(self.extra_up)) + "}"
        return parts


EMPTY = Finite()


def atomset(atoms: Iterable[Atom] = ()) -> Finite:
    return Finite(frozenset(atoms))


# Functional spellings of the set operations.

def atomset_member(a: Atom, s: AtomSet) -> bool:
    return a in s


def atomset_union(s: AtomSet, t: AtomSet) -> AtomSet:
    return s.union(t)


def atomset_remove(s: AtomSet, a: Atom) -> AtomSet:
    return s.remove(a)


def atomset_subset(s: AtomSet, t: AtomSet) -> bool:
    return s.issubset(t)


def permute_atomset(pi: Permutation, s: AtomSet) -> AtomSet:
    return s.permute(pi)


def _up_indices(avoid) -> set[int]:
    if isinstance(avoid, AtomSet):
        return {a.index for a in avoid.up_atoms()}
    return {a.index for a in avoid if a.is_up}


def fresh_up(avoid: Union[AtomSet, Iterable[Atom]] = ()) -> Atom:
    """The UP atom of least index outside ``avoid``."""
    taken = _up_indices(avoid)
    i = 0
    while i in taken:
        i += 1
    return Atom(Sort.UP, i)


def fresh_ups(n: int, avoid: Union[AtomSet, Iterable[Atom]] = ()) -> list[Atom]:
    taken = _up_indices(avoid)
    out, i = [], 0
    while len(out) < n:
        if i not in taken:
            out.append(Atom(Sort.UP, i))
        i += 1
    return out
