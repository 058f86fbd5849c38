"""Oriented point relations (OPRA_m), representation only.

An OPRA_m relation between oriented points A and B names the sector of B as
seen from A and the sector of A as seen from B. With granularity ``m`` the
plane around each point is cut by ``m`` lines into ``4m`` sectors (even
numbers are half-lines, odd numbers the open regions between them). When A
and B occupy the same position only one sector is meaningful: the
orientation of B relative to A.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class OpraRelation:
    granularity: int
    sector_of_b_from_a: int
    sector_of_a_from_b: int = 0
    same_position: bool = False

    def __post_init__(self):
        if self.granularity < 1:
            raise ValueError("granularity must be a positive integer")
        sectors = 4 * self.granularity
        for s in (self.sector_of_b_from_a, self.sector_of_a_from_b):
            if not 0 <= s < sectors:
                raise ValueError(f"sector {s} outside 0..{sectors - 1} for granularity {self.granularity}")

    def __str__(self):
        m = self.granularity
        if self.same_position:
            return f"{m}<{self.sector_of_b_from_a}"
        return f"{m}<{self.sector_of_a_from_b}^{self.sector_of_b_from_a}"


def opra_converse(r: OpraRelation) -> OpraRelation:
    """Converse of an OPRA relation: the two viewpoints swap.

    For coincident points the sector is kept as is; only one orientation
    sector is stored for that case.
    """
    if r.same_position:
        return r
    return replace(r, sector_of_b_from_a=r.sector_of_a_from_b, sector_of_a_from_b=r.sector_of_b_from_a)
