"""Discrete-region model of RCC8 used to find witnesses for table entries.

Regions are axis-aligned rectangles of cells in an ``n x n`` grid embedded
in an unbounded plane of cells. Two regions are connected when they share a
cell or contain edge-adjacent cells. A part is tangential when one of its
cells touches a cell outside the containing region (cells beyond the grid
border count as outside).

The model can only show that a triple is realizable. It says nothing about
entries a table omits.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np

RCC8_RELATIONS = ("DC", "EC", "PO", "EQ", "TPP", "TPPi", "NTPP", "NTPPi")


def _rectangles(n: int) -> list[frozenset[tuple[int, int]]]:
    spans = list(combinations_with_replacement(range(n), 2))
    return [frozenset((r, c) for r in range(r0, r1 + 1) for c in range(c0, c1 + 1))
            for r0, r1 in spans for c0, c1 in spans]


def _closed_neighbourhood(region) -> frozenset[tuple[int, int]]:
    out = set(region)
    for r, c in region:
        out.update(((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)))
    return frozenset(out)


def region_relation(x, y) -> str:
    """RCC8 relation between two discrete regions (sets of cells)."""
    if x == y:
        return "EQ"
    if x & y:
        if x < y:
            return "TPP" if _closed_neighbourhood(x) - y else "NTPP"
        if y < x:
            return "TPPi" if _closed_neighbourhood(y) - x else "NTPPi"
        return "PO"
    if _closed_neighbourhood(x) & y:
        return "EC"
    return "DC"


def grid_witnesses(n: int = 4) -> dict[tuple[str, str], frozenset[str]]:
    """For every pair (b, b') the set of b'' with a witness (X, Z, Y) in the grid
    model such that X b Z, Z b' Y and X b'' Y."""
    regions = _rectangles(n)
    rel = np.array([[RCC8_RELATIONS.index(region_relation(a, b)) for b in regions]
                    for a in regions], dtype=np.int8)
    k = len(RCC8_RELATIONS)
    found = np.zeros((k, k, k), dtype=bool)
    for z in range(len(regions)):
        to_z = rel[:, z]
        from_z = rel[z, :]
        for b in range(k):
            xs = np.flatnonzero(to_z == b)
            if not xs.size:
                continue
            for b2 in range(k):
                ys = np.flatnonzero(from_z == b2)
                if not ys.size:
                    continue
                found[b, b2, np.unique(rel[np.ix_(xs, ys)])] = True
    return {(RCC8_RELATIONS[a], RCC8_RELATIONS[b]):
            frozenset(RCC8_RELATIONS[c] for c in np.flatnonzero(found[a, b]))
            for a in range(k) for b in range(k)}
