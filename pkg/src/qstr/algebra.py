"""Relation algebra over a finite set of base relations.

A relation is a disjunction of base relations and is stored as an integer
bitmask: bit ``k`` is set when base relation ``k`` is part of the
disjunction. All set operations are therefore single integer operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import CalculusMismatchError

MAX_BASE_RELATIONS = 64


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class Calculus:
    """A finite JEPD system of base relations with its converse and weak
    composition tables.

    ``composition[a][b]`` is the bitmask of the weak composition of base
    relations ``a`` and ``b``. ``converse[k]`` is the index of the converse
    of base relation ``k``.
    """

    name: str
    domain_description: str
    base_relations: tuple[str, ...]
    identity: int
    converse: tuple[int, ...]
    composition: tuple[tuple[int, ...], ...]
    atomic_closure_decides: bool = False

    def __post_init__(self):
        n = len(self.base_relations)
        if not 0 < n <= MAX_BASE_RELATIONS:
            raise ValueError(f"calculus must have 1..{MAX_BASE_RELATIONS} base relations, got {n}")
        if len(set(self.base_relations)) != n:
            raise ValueError("duplicate base relation names")
        if not 0 <= self.identity < n:
            raise ValueError("identity index out of range")
        if len(self.converse) != n or any(not 0 <= c < n for c in self.converse):
            raise ValueError("converse must map every base relation to a base relation")
        if len(self.composition) != n or any(len(row) != n for row in self.composition):
            raise ValueError("composition table must be |B| x |B|")
        object.__setattr__(self, "_index", {name: k for k, name in enumerate(self.base_relations)})
        object.__setattr__(self, "_compose_cache", {})
        object.__setattr__(self, "_converse_cache", {})

    # equal calculi define the same algebra; the closure flag is metadata
    def _signature(self):
        return (self.name, self.domain_description, self.base_relations, self.identity,
                self.converse, self.composition)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Calculus):
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash(self._signature())
            object.__setattr__(self, "_hash", h)
            return h

    def __repr__(self):
        return f"Calculus({self.name!r}, {len(self.base_relations)} base relations)"

    @property
    def size(self) -> int:
        return len(self.base_relations)

    @property
    def universal_bits(self) -> int:
        return (1 << self.size) - 1

    @property
    def identity_bits(self) -> int:
        return 1 << self.identity

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"{name!r} is not a base relation of {self.name}") from None

    def bits_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return mask

    def names_of(self, mask: int) -> list[str]:
        return [self.base_relations[k] for k in iter_bits(mask)]

    def converse_bits(self, mask: int) -> int:
        cached = self._converse_cache.get(mask)
        if cached is None:
            cached = 0
            for k in iter_bits(mask):
                cached |= 1 << self.converse[k]
            self._converse_cache[mask] = cached
        return cached

    def compose_bits(self, r: int, s: int) -> int:
        key = (r, s)
        cached = self._compose_cache.get(key)
        if cached is None:
            cached = 0
            full = self.universal_bits
            for a in iter_bits(r):
                row = self.composition[a]
                for b in iter_bits(s):
                    cached |= row[b]
                if cached == full:
                    break
            self._compose_cache[key] = cached
        return cached

    def relation(self, *names: str) -> Relation:
        """Build a relation from base-relation names, e.g. ``ia.relation("p", "m")``."""
        return Relation(self.bits_of(names), self)

    def universal(self) -> Relation:
        return Relation(self.universal_bits, self)

    def empty(self) -> Relation:
        return Relation(0, self)

    def base(self, k: int) -> Relation:
        return Relation(1 << k, self)

    def entry(self, a: str | int, b: str | int) -> Relation:
        """Weak composition table entry for two base relations."""
        if isinstance(a, str):
            a = self.index(a)
        if isinstance(b, str):
            b = self.index(b)
        return Relation(self.composition[a][b], self)


@dataclass(frozen=True)
class Relation:
    """A subset of the base relations of one calculus."""

    bits: int
    calculus: Calculus = field(repr=False)

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.calculus.size:
            raise ValueError(f"bits {self.bits:#x} outside the {self.calculus.size} base relations")

    @property
    def names(self) -> list[str]:
        return self.calculus.names_of(self.bits)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, name: str) -> bool:
        return bool(self.bits >> self.calculus.index(name) & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self):
        return "{" + ", ".join(self.names) + "}"

    def _check(self, other: Relation) -> None:
        if self.calculus is not other.calculus and self.calculus != other.calculus:
            raise CalculusMismatchError(
                f"cannot combine relations of {self.calculus.name} and {other.calculus.name}")

    def __or__(self, other: Relation) -> Relation:
        return union(self, other)

    def __and__(self, other: Relation) -> Relation:
        return intersect(self, other)

    def __invert__(self) -> Relation:
        return complement(self)

    def __le__(self, other: Relation) -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0


def converse(r: Relation) -> Relation:
    return Relation(r.calculus.converse_bits(r.bits), r.calculus)


def compose(r: Relation, s: Relation) -> Relation:
    """Weak composition, lifted from base relations by union."""
    r._check(s)
    return Relation(r.calculus.compose_bits(r.bits, s.bits), r.calculus)


def union(r: Relation, s: Relation) -> Relation:
    r._check(s)
    return Relation(r.bits | s.bits, r.calculus)


def intersect(r: Relation, s: Relation) -> Relation:
    r._check(s)
    return Relation(r.bits & s.bits, r.calculus)


def complement(r: Relation) -> Relation:
    return Relation(r.calculus.universal_bits & ~r.bits, r.calculus)


def is_atomic(r: Relation) -> bool:
    return r.bits != 0 and r.bits & (r.bits - 1) == 0


def universal(calculus: Calculus) -> Relation:
    return calculus.universal()


def make_calculus(name: str, base_relations: Sequence[str], identity: str,
                  converse: dict[str, str], composition: dict[tuple[str, str], Iterable[str]],
                  domain_description: str = "", atomic_closure_decides: bool = False) -> Calculus:
    """Build a calculus from name-keyed tables."""
    index = {n: k for k, n in enumerate(base_relations)}
    conv = tuple(index[converse[n]] for n in base_relations)
    table = []
    for a in base_relations:
        row = []
        for b in base_relations:
            mask = 0
            for c in composition[a, b]:
                mask |= 1 << index[c]
            row.append(mask)
        table.append(tuple(row))
    return Calculus(name, domain_description, tuple(base_relations), index[identity],
                    conv, tuple(table), atomic_closure_decides)
