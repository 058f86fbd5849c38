"""Probability-annotated networks, robustness, and rectification.

Edge distributions are stored for unordered pairs in the ``i < j``
direction and keyed by base-relation index. Reading a pair in the other
direction maps every key through the converse permutation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .algebra import iter_bits
from .errors import ContradictionError, NoScenarioError
from .network import QCN, _check_compatible, intersect_networks
from .solver import _branches, _choose_edge, _closed_root, a_closure, iter_scenarios, solve

Prob = Union[float, Fraction]
EdgeDist = dict[tuple[int, int], dict[int, Prob]]
TOLERANCE = 1e-9


class MissingProbabilityWarning(UserWarning):
    pass


@dataclass
class ProbabilisticQCN:
    """A network annotated with relation and label probabilities.

    ``label_dist`` maps a variable index to ``{label: probability}``; a
    label distribution may sum to less than one. Labels are carried along
    and exported but never affect relation-level reasoning.
    """

    qcn: QCN
    edge_dist: EdgeDist = field(default_factory=dict)
    label_dist: dict[int, dict[str, Prob]] = field(default_factory=dict)
    source: str = "external"

    def edge(self, i: int, j: int) -> dict[int, Prob] | None:
        """Distribution of edge (i, j) in that direction, or None if unset."""
        if i < j:
            return self.edge_dist.get((i, j))
        dist = self.edge_dist.get((j, i))
        if dist is None:
            return None
        conv = self.qcn.calculus.converse
        return {conv[b]: p for b, p in dist.items()}

    def named_edge(self, i: int, j: int) -> dict[str, Prob] | None:
        dist = self.edge(i, j)
        if dist is None:
            return None
        names = self.qcn.calculus.base_relations
        return {names[b]: p for b, p in sorted(dist.items())}

    def problems(self) -> list[str]:
        """Every broken invariant; empty for a well-formed annotated network."""
        out = []
        q = self.qcn
        v = q.variables
        for (i, j), dist in self.edge_dist.items():
            if not 0 <= i < j < q.n:
                out.append(f"edge key {(i, j)} is not an ordered pair of variables")
                continue
            if any(not 0 <= p <= 1 for p in dist.values()):
                out.append(f"edge ({v[i]}, {v[j]}) has a probability outside [0, 1]")
            total = math.fsum(float(p) for p in dist.values())
            if abs(total - 1) > TOLERANCE:
                out.append(f"edge ({v[i]}, {v[j]}) probabilities sum to {total!r}, not 1")
            support = sum(1 << b for b, p in dist.items() if p > 0)
            if support & ~q.bits(i, j):
                out.append(f"edge ({v[i]}, {v[j]}) gives probability to relations outside its constraint")
        for i, dist in self.label_dist.items():
            if any(not 0 <= p <= 1 for p in dist.values()):
                out.append(f"label of {v[i]} has a probability outside [0, 1]")
            if math.fsum(float(p) for p in dist.values()) > 1 + TOLERANCE:
                out.append(f"label probabilities of {v[i]} sum to more than 1")
        return out


@dataclass(frozen=True)
class RobustnessReport:
    refinement: QCN
    per_edge_probability: dict[tuple[str, str], float]
    robustness: float
    satisfiable: bool


def format_probability(p: Prob) -> str:
    """Exact text for a probability: ``a/b`` for fractions, ``repr`` for floats."""
    if isinstance(p, Fraction):
        return f"{p.numerator}/{p.denominator}"
    return repr(float(p))


def _support(dist: Mapping[int, Prob]) -> int:
    return sum(1 << b for b, p in dist.items() if p > 0)


def edge_probabilities_from_scenarios(qcn: QCN) -> EdgeDist:
    """Frequency of each base relation on each edge across all scenarios.

    Values are exact fractions; every edge sums to exactly one.
    """
    counts: dict[tuple[int, int], dict[int, int]] = {e: {} for e in qcn.pairs()}
    total = 0
    for s in iter_scenarios(qcn):
        total += 1
        for e in counts:
            b = s.bits(*e).bit_length() - 1
            counts[e][b] = counts[e].get(b, 0) + 1
    if total == 0:
        raise NoScenarioError(f"network {qcn.name} has no scenario")
    return {e: {b: Fraction(c, total) for b, c in sorted(bc.items())} for e, bc in counts.items()}


def scenario_derived(qcn: QCN) -> ProbabilisticQCN:
    return ProbabilisticQCN(qcn, edge_probabilities_from_scenarios(qcn), source="scenario-derived")


def _dist_of(edge_dist, i: int, j: int) -> dict[int, Prob] | None:
    if isinstance(edge_dist, ProbabilisticQCN):
        return edge_dist.edge(i, j)
    return edge_dist.get((i, j))


def robustness(edge_dist: EdgeDist | ProbabilisticQCN, refinement: QCN) -> RobustnessReport:
    """Mean probability of the chosen base relations over all unordered pairs.

    Edges without a distribution contribute 0 and trigger a
    MissingProbabilityWarning.
    """
    if not refinement.is_atomic():
        raise ValueError("robustness is defined for atomic refinements only")
    per_edge = {}
    exact = Fraction(0)
    missing = []
    for i, j in refinement.pairs():
        dist = _dist_of(edge_dist, i, j)
        b = refinement.bits(i, j).bit_length() - 1
        if dist is None:
            missing.append((refinement.variables[i], refinement.variables[j]))
            p = 0.0
        else:
            p = dist.get(b, 0.0)
        per_edge[refinement.variables[i], refinement.variables[j]] = float(p)
        exact += Fraction(p)
    if missing:
        warnings.warn(f"no probability for edges {missing}; treated as 0", MissingProbabilityWarning,
                      stacklevel=2)
    pairs = refinement.n * (refinement.n - 1) // 2
    value = float(exact / pairs) if pairs else 1.0
    return RobustnessReport(refinement, per_edge, value, a_closure(refinement).consistent)


def _integer_weights(qcn: QCN, edge_dist) -> dict[tuple[int, int], dict[int, int]]:
    """Scale every probability to an integer over one common denominator so
    that sums and comparisons during search are exact."""
    fracs = {}
    missing = []
    for e in qcn.pairs():
        dist = _dist_of(edge_dist, *e)
        if dist is None:
            missing.append((qcn.variables[e[0]], qcn.variables[e[1]]))
            dist = {}
        fracs[e] = {b: Fraction(p) for b, p in dist.items()}
    if missing:
        warnings.warn(f"no probability for edges {missing}; treated as 0", MissingProbabilityWarning,
                      stacklevel=3)
    denom = 1
    for dist in fracs.values():
        for p in dist.values():
            denom = denom * p.denominator // math.gcd(denom, p.denominator)
    return {e: {b: int(p * denom) for b, p in dist.items()} for e, dist in fracs.items()}


def max_robust_scenario(qcn: QCN, edge_dist: EdgeDist | ProbabilisticQCN) -> RobustnessReport | None:
    """Scenario of ``qcn`` with the highest robustness under ``edge_dist``.

    Branch and bound over the solver's search tree. The bound at a node is
    the sum, over edges, of the best weight still available in the edge's
    current (closed) domain. Among equally robust scenarios the first in
    search order wins.
    """
    root = _closed_root(qcn)
    if root is None:
        return None
    calc = qcn.calculus
    weights = _integer_weights(qcn, edge_dist)
    edges = list(weights)

    def bound(m) -> int:
        total = 0
        for i, j in edges:
            w = weights[i, j]
            if w:
                total += max((w.get(b, 0) for b in iter_bits(m[i][j])), default=0)
        return total

    best = None
    best_value = -1

    def dfs(m):
        nonlocal best, best_value
        ub = bound(m)
        if ub <= best_value:
            return
        edge = _choose_edge(m)
        if edge is None:
            best, best_value = m, ub
            return
        for child in _branches(m, calc, edge):
            dfs(child)

    dfs(root)
    scenario = QCN(calc, qcn.variables, qcn.name, best)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MissingProbabilityWarning)
        return robustness(edge_dist, scenario)


def minimal_supports(qcn: QCN) -> dict[tuple[int, int], int] | None:
    """For every edge, the base relations that occur on it in at least one
    scenario. None when the network has no scenario."""
    if solve(qcn) is None:
        return None
    out = {}
    calc = qcn.calculus
    for i, j in qcn.pairs():
        keep = 0
        for b in iter_bits(qcn.bits(i, j)):
            trial = qcn.copy()
            trial._set(i, j, 1 << b)
            if solve(trial) is not None:
                keep |= 1 << b
        out[i, j] = keep
    return out


def rectify(pq: ProbabilisticQCN, background: QCN) -> ProbabilisticQCN:
    """Prune relation supports against hard background knowledge.

    Each edge keeps only the relations that occur in some scenario of the
    evidence network intersected with the background; surviving
    probabilities are rescaled proportionally to sum to one.
    """
    _check_compatible(pq.qcn, background)
    combined = intersect_networks(pq.qcn, background)
    v = pq.qcn.variables
    names = pq.qcn.calculus.names_of
    for i, j in combined.pairs():
        if not combined.bits(i, j) and pq.qcn.bits(i, j) and background.bits(i, j):
            raise ContradictionError(
                f"edge ({v[i]}, {v[j]}): evidence {{{' '.join(names(pq.qcn.bits(i, j)))}}} is disjoint "
                f"from background {{{' '.join(names(background.bits(i, j)))}}}", (v[i], v[j]))
    supports = minimal_supports(combined)
    if supports is None:
        raise NoScenarioError("evidence and background together have no scenario")
    out_qcn = combined.copy()
    new_dist: EdgeDist = {}
    for (i, j), allowed in supports.items():
        dist = pq.edge_dist.get((i, j))
        if dist is None:
            out_qcn._set(i, j, allowed)
            continue
        kept = _support(dist) & allowed
        if not kept:
            raise ContradictionError(
                f"edge ({v[i]}, {v[j]}): evidence {{{' '.join(names(_support(dist)))}}} "
                f"contradicts background, which allows only {{{' '.join(names(allowed))}}}",
                (v[i], v[j]))
        if kept == _support(dist):
            new_dist[i, j] = dict(dist)
        else:
            total = sum(p for b, p in dist.items() if kept >> b & 1)
            new_dist[i, j] = {b: p / total for b, p in dist.items() if kept >> b & 1}
        out_qcn._set(i, j, kept)
    return ProbabilisticQCN(out_qcn, new_dist, {k: dict(d) for k, d in pq.label_dist.items()}, pq.source)
