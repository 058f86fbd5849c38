"""Algebraic closure, scenario search and scenario enumeration.

Networks are handled as raw bitmask matrices during search. The branching
order is fixed: the unfixed edge with the fewest base relations first,
ties broken by the lowest ``(i, j)``, and base relations tried in the
calculus's declaration order. Every search entry point in the package
walks this same tree, so "first scenario found" is well defined.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice
from typing import Iterable, Iterator

from .algebra import Calculus, iter_bits
from .network import QCN

Matrix = list[list[int]]


@dataclass(frozen=True)
class ClosureResult:
    closed_network: QCN
    consistent: bool
    revisions: int


def _close(m: Matrix, calc: Calculus, edges: Iterable[tuple[int, int]]) -> tuple[bool, int]:
    """Run closure in place starting from the given (i < j) edges.

    Returns ``(consistent, revisions)``. Stops at the first emptied edge.
    """
    n = len(m)
    compose = calc.compose_bits
    conv = calc.converse_bits
    queue = deque(edges)
    queued = set(queue)
    revisions = 0
    while queue:
        edge = queue.popleft()
        queued.discard(edge)
        i, j = edge
        for k in range(n):
            if k == i or k == j:
                continue
            # C(i,k) <- C(i,k) & C(i,j) o C(j,k)
            old = m[i][k]
            new = old & compose(m[i][j], m[j][k])
            if new != old:
                m[i][k] = new
                m[k][i] = conv(new)
                revisions += 1
                if not new:
                    return False, revisions
                e = (i, k) if i < k else (k, i)
                if e not in queued:
                    queued.add(e)
                    queue.append(e)
            # C(k,j) <- C(k,j) & C(k,i) o C(i,j)
            old = m[k][j]
            new = old & compose(m[k][i], m[i][j])
            if new != old:
                m[k][j] = new
                m[j][k] = conv(new)
                revisions += 1
                if not new:
                    return False, revisions
                e = (k, j) if k < j else (j, k)
                if e not in queued:
                    queued.add(e)
                    queue.append(e)
    return True, revisions


def _all_edges(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def a_closure(qcn: QCN) -> ClosureResult:
    """Fixpoint of C(i,j) <- C(i,j) & (C(i,k) o C(k,j)) over all triples."""
    out = qcn.copy()
    if out.trivially_inconsistent:
        return ClosureResult(out, False, 0)
    ok, revisions = _close(out._m, qcn.calculus, _all_edges(qcn.n))
    return ClosureResult(out, ok, revisions)


def _choose_edge(m: Matrix) -> tuple[int, int] | None:
    best = None
    best_size = 0
    n = len(m)
    for i in range(n):
        row = m[i]
        for j in range(i + 1, n):
            size = row[j].bit_count()
            if size > 1 and (best is None or size < best_size):
                best, best_size = (i, j), size
                if size == 2:
                    return best
    return best


def _branches(m: Matrix, calc: Calculus, edge: tuple[int, int]) -> Iterator[Matrix]:
    """Closed, consistent children of ``m`` obtained by fixing ``edge``."""
    i, j = edge
    for b in iter_bits(m[i][j]):
        child = [row[:] for row in m]
        child[i][j] = 1 << b
        child[j][i] = 1 << calc.converse[b]
        ok, _ = _close(child, calc, [edge])
        if ok:
            yield child


def _scenarios(m: Matrix, calc: Calculus) -> Iterator[Matrix]:
    edge = _choose_edge(m)
    if edge is None:
        yield m
        return
    for child in _branches(m, calc, edge):
        yield from _scenarios(child, calc)


def _closed_root(qcn: QCN) -> Matrix | None:
    if qcn.trivially_inconsistent:
        return None
    m = [row[:] for row in qcn._m]
    ok, _ = _close(m, qcn.calculus, _all_edges(qcn.n))
    return m if ok else None


def _wrap(qcn: QCN, m: Matrix) -> QCN:
    return QCN(qcn.calculus, qcn.variables, qcn.name, m)


def iter_scenarios(qcn: QCN) -> Iterator[QCN]:
    """Lazily yield every scenario of ``qcn`` in the canonical search order."""
    root = _closed_root(qcn)
    if root is None:
        return
    for m in _scenarios(root, qcn.calculus):
        yield _wrap(qcn, m)


def solve(qcn: QCN) -> QCN | None:
    """First scenario in search order, or None when there is none.

    For calculi whose ``atomic_closure_decides`` flag is false the result is
    only known to be closure-consistent.
    """
    return next(iter_scenarios(qcn), None)


def _subtree(args) -> list[Matrix]:
    m, calc, limit = args
    return list(islice(_scenarios(m, calc), limit))


def enumerate_scenarios(qcn: QCN, limit: int | None = None, jobs: int = 1) -> list[QCN]:
    """All scenarios of ``qcn`` (at most ``limit``), duplicate free, in search order.

    With ``jobs > 1`` the branches of the first choice point are explored in
    worker processes; results are concatenated in branch order, so the
    output is identical to the sequential run.
    """
    if limit is not None and limit < 1:
        raise ValueError("limit must be >= 1")
    if jobs <= 1:
        return list(islice(iter_scenarios(qcn), limit))
    root = _closed_root(qcn)
    if root is None:
        return []
    edge = _choose_edge(root)
    if edge is None:
        return [_wrap(qcn, root)]
    children = list(_branches(root, qcn.calculus, edge))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(_subtree, [(c, qcn.calculus, limit) for c in children])
        found = [m for part in parts for m in part]
    return [_wrap(qcn, m) for m in found[:limit]]


def is_scenario_of(candidate: QCN, source: QCN) -> bool:
    """Independent re-check: atomic, refines ``source``, and every triple is
    closed under weak composition."""
    if candidate.calculus != source.calculus or candidate.variables != source.variables:
        return False
    if not candidate.is_atomic() or not candidate.refines(source):
        return False
    calc = candidate.calculus
    n = candidate.n
    m = candidate._m
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if m[i][j] & ~calc.compose_bits(m[i][k], m[k][j]):
                    return False
    return True
