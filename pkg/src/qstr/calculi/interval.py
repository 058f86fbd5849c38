"""Interval Algebra composition derived from endpoint orderings.

An IA base relation between two intervals is fixed by how their four
endpoints compare. Enumerating every weak ordering of the six endpoints of
three intervals therefore realizes every composable triple, which gives the
full weak-composition table without transcribing it by hand.
"""

from __future__ import annotations

from itertools import product

IA_RELATIONS = ("eq", "p", "pi", "m", "mi", "o", "oi", "s", "si", "d", "di", "f", "fi")

IA_CONVERSE = {"eq": "eq", "p": "pi", "pi": "p", "m": "mi", "mi": "m", "o": "oi", "oi": "o",
               "s": "si", "si": "s", "d": "di", "di": "d", "f": "fi", "fi": "f"}


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


def interval_relation(x: tuple, y: tuple) -> str:
    """Name of the IA base relation ``x b y`` for intervals given as (start, end)."""
    xs, xe = x
    ys, ye = y
    if xe < ys:
        return "p"
    if ye < xs:
        return "pi"
    if xe == ys:
        return "m"
    if ye == xs:
        return "mi"
    starts, ends = _cmp(xs, ys), _cmp(xe, ye)
    return {
        (0, 0): "eq",
        (0, -1): "s",
        (0, 1): "si",
        (1, -1): "d",
        (-1, 1): "di",
        (1, 0): "f",
        (-1, 0): "fi",
        (-1, -1): "o",
        (1, 1): "oi",
    }[starts, ends]


def derive_ia_table() -> dict[tuple[str, str], frozenset[str]]:
    """Weak composition of IA base relations by brute force.

    Every weak ordering of six endpoints is represented by an assignment of
    ranks 0..5 (ties allowed); that is enough points to realize any order
    configuration. For each realized triple with ``x b z`` and ``z b' y``
    the relation ``x b'' y`` is recorded under ``(b, b')``.
    """
    table: dict[tuple[str, str], set[str]] = {(a, b): set() for a in IA_RELATIONS for b in IA_RELATIONS}
    intervals = [(s, e) for s in range(6) for e in range(6) if s < e]
    for x, z, y in product(intervals, repeat=3):
        table[interval_relation(x, z), interval_relation(z, y)].add(interval_relation(x, y))
    return {key: frozenset(value) for key, value in table.items()}
