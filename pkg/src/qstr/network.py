"""Qualitative constraint networks."""

from __future__ import annotations

from typing import Iterator, Sequence

from .algebra import Calculus, Relation
from .errors import CalculusMismatchError


class QCN:
    """Variables plus a converse-consistent matrix of relations.

    The diagonal is always ``{Id}`` and writing ``(i, j)`` also writes the
    converse at ``(j, i)``. Public operations return new networks; the
    in-place ``_set`` is for solvers that own their working copy.
    """

    __slots__ = ("calculus", "variables", "name", "_m", "_index")

    def __init__(self, calculus: Calculus, variables: Sequence[str], name: str = "n",
                 _matrix: list[list[int]] | None = None):
        variables = tuple(variables)
        if not variables:
            raise ValueError("a network needs at least one variable")
        if len(set(variables)) != len(variables):
            dupes = sorted({v for v in variables if variables.count(v) > 1})
            raise ValueError(f"duplicate variable names: {', '.join(dupes)}")
        self.calculus = calculus
        self.variables = variables
        self.name = name
        self._index = {v: k for k, v in enumerate(variables)}
        if _matrix is None:
            n = len(variables)
            full = calculus.universal_bits
            _matrix = [[full] * n for _ in range(n)]
            for i in range(n):
                _matrix[i][i] = calculus.identity_bits
        self._m = _matrix

    @property
    def n(self) -> int:
        return len(self.variables)

    def index(self, v: str | int) -> int:
        if isinstance(v, int):
            if not 0 <= v < self.n:
                raise IndexError(f"variable index {v} out of range")
            return v
        try:
            return self._index[v]
        except KeyError:
            raise KeyError(f"unknown variable {v!r}") from None

    def __getitem__(self, key: tuple[str | int, str | int]) -> Relation:
        i, j = key
        return Relation(self._m[self.index(i)][self.index(j)], self.calculus)

    def bits(self, i: int, j: int) -> int:
        return self._m[i][j]

    def copy(self) -> QCN:
        return QCN(self.calculus, self.variables, self.name, [row[:] for row in self._m])

    def _set(self, i: int, j: int, bits: int) -> None:
        self._m[i][j] = bits
        self._m[j][i] = self.calculus.converse_bits(bits)

    def pairs(self) -> Iterator[tuple[int, int]]:
        """Unordered off-diagonal pairs as ``(i, j)`` with ``i < j``."""
        n = self.n
        for i in range(n):
            for j in range(i + 1, n):
                yield i, j

    @property
    def trivially_inconsistent(self) -> bool:
        return any(self._m[i][j] == 0 for i, j in self.pairs())

    def is_atomic(self) -> bool:
        return all(b and b & (b - 1) == 0 for b in (self._m[i][j] for i, j in self.pairs()))

    def non_universal_count(self) -> int:
        full = self.calculus.universal_bits
        return sum(1 for i, j in self.pairs() if self._m[i][j] != full)

    def refines(self, other: QCN) -> bool:
        """True when every constraint of self is a subset of other's."""
        _check_compatible(self, other)
        return all(self._m[i][j] & ~other._m[i][j] == 0 for i, j in self.pairs())

    def __eq__(self, other):
        if not isinstance(other, QCN):
            return NotImplemented
        return (self.calculus == other.calculus and self.variables == other.variables
                and self.name == other.name and self._m == other._m)

    def __repr__(self):
        edges = ", ".join(f"{self.variables[i]} {self[i, j]!r} {self.variables[j]}"
                          for i, j in self.pairs()
                          if self._m[i][j] != self.calculus.universal_bits)
        return f"QCN({self.name}, {self.calculus.name}, [{edges}])"


def _check_compatible(a: QCN, b: QCN) -> None:
    if a.calculus != b.calculus:
        raise CalculusMismatchError(f"networks use different calculi: {a.calculus.name} vs {b.calculus.name}")
    if a.variables != b.variables:
        raise ValueError("networks are over different variables")


def new_qcn(calculus: Calculus, variables: Sequence[str], name: str = "n") -> QCN:
    """Network with every off-diagonal constraint universal."""
    return QCN(calculus, variables, name)


def set_constraint(qcn: QCN, i, j, r: Relation) -> QCN:
    """Write ``r`` at (i, j) and its converse at (j, i)."""
    if r.calculus != qcn.calculus:
        raise CalculusMismatchError(f"relation of {r.calculus.name} on a {qcn.calculus.name} network")
    i, j = qcn.index(i), qcn.index(j)
    if i == j:
        if r.bits != qcn.calculus.identity_bits:
            raise ValueError("diagonal constraints are fixed to the identity relation")
        return qcn.copy()
    out = qcn.copy()
    out._set(i, j, r.bits)
    return out


def refine(qcn: QCN, i, j, r: Relation) -> QCN:
    """Intersect the constraint at (i, j) with ``r``."""
    if r.calculus != qcn.calculus:
        raise CalculusMismatchError(f"relation of {r.calculus.name} on a {qcn.calculus.name} network")
    i, j = qcn.index(i), qcn.index(j)
    if i == j:
        if not r.bits & qcn.calculus.identity_bits:
            raise ValueError("diagonal constraints are fixed to the identity relation")
        return qcn.copy()
    out = qcn.copy()
    out._set(i, j, qcn.bits(i, j) & r.bits)
    return out


def intersect_networks(a: QCN, b: QCN) -> QCN:
    _check_compatible(a, b)
    out = a.copy()
    for i, j in a.pairs():
        out._set(i, j, a.bits(i, j) & b.bits(i, j))
    return out


def audit(qcn: QCN) -> list[str]:
    """Return every broken QCN invariant; empty when the network is well formed."""
    problems = []
    c = qcn.calculus
    for i in range(qcn.n):
        if qcn._m[i][i] != c.identity_bits:
            problems.append(f"diagonal ({qcn.variables[i]}) is not {{Id}}")
        for j in range(qcn.n):
            bits = qcn._m[i][j]
            if bits < 0 or bits >> c.size:
                problems.append(f"entry ({qcn.variables[i]}, {qcn.variables[j]}) outside the calculus")
            elif qcn._m[j][i] != c.converse_bits(bits):
                problems.append(f"({qcn.variables[j]}, {qcn.variables[i]}) is not the converse "
                                f"of ({qcn.variables[i]}, {qcn.variables[j]})")
    return problems


def to_dot(qcn: QCN) -> str:
    """Graphviz rendering: one edge per constrained pair, universal edges omitted."""
    lines = [f'digraph "{qcn.name}" {{']
    lines += [f'  "{v}";' for v in qcn.variables]
    full = qcn.calculus.universal_bits
    for i, j in qcn.pairs():
        bits = qcn.bits(i, j)
        if bits == full:
            continue
        label = "|".join(qcn.calculus.names_of(bits))
        lines.append(f'  "{qcn.variables[i]}" -> "{qcn.variables[j]}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
