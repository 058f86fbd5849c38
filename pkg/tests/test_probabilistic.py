import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstr.calculi import builtin
from qstr.errors import ContradictionError, NoScenarioError
from qstr.generate import random_network
from qstr.io import parse_network
from qstr.network import intersect_networks, new_qcn, set_constraint
from qstr.probabilistic import (MissingProbabilityWarning, ProbabilisticQCN,
                                edge_probabilities_from_scenarios, max_robust_scenario,
                                minimal_supports, rectify, robustness)
from qstr.solver import enumerate_scenarios

from conftest import DATA, FIXTURES
from oracles import frequencies, hand_robustness


def atomic(calc, names, rels):
    q = new_qcn(calc, names)
    for (i, j), r in rels.items():
        q = set_constraint(q, i, j, calc.relation(r))
    return q


def test_single_scenario_probabilities(ia):
    q = atomic(ia, "abc", {(0, 1): "p", (1, 2): "m", (0, 2): "p"})
    probs = edge_probabilities_from_scenarios(q)
    assert all(list(d.values()) == [1] for d in probs.values())
    rep = robustness(probs, q)
    assert rep.robustness == 1.0 and rep.satisfiable


def test_two_interval_uniform(ia):
    probs = edge_probabilities_from_scenarios(new_qcn(ia, ["x", "y"]))
    assert probs[0, 1] == {b: Fraction(1, 13) for b in range(13)}


def test_background_forces_contained(rcc8):
    q = new_qcn(rcc8, ["x", "y"])
    q = set_constraint(q, 0, 1, rcc8.relation("NTPP", "PO"))
    q = intersect_networks(q, set_constraint(new_qcn(rcc8, ["x", "y"]), 0, 1, rcc8.relation("NTPP")))
    assert edge_probabilities_from_scenarios(q)[0, 1] == {rcc8.index("NTPP"): 1}


def test_no_scenario_error():
    with pytest.raises(NoScenarioError):
        edge_probabilities_from_scenarios(parse_network(FIXTURES / "ia_pp_pi.net").qcn)


def test_frequencies_match_counting_oracle(ia, rcc8):
    for calc, seed in [(ia, 1), (rcc8, 2), (ia, 3)]:
        q = random_network(calc, 4, 0.7, 3, seed)
        if enumerate_scenarios(q, limit=1):
            assert edge_probabilities_from_scenarios(q) == frequencies(q)


def test_robustness_example_point_nine(rcc8):
    q = atomic(rcc8, "abc", {(0, 1): "DC", (0, 2): "DC", (1, 2): "EC"})
    dist = {(0, 1): {rcc8.index("DC"): 0.9, rcc8.index("EC"): 0.1},
            (0, 2): {rcc8.index("DC"): 0.8, rcc8.index("PO"): 0.2},
            (1, 2): {rcc8.index("EC"): 1.0}}
    rep = robustness(dist, q)
    assert rep.robustness == pytest.approx(0.9, abs=1e-12)
    assert rep.per_edge_probability == {("a", "b"): 0.9, ("a", "c"): 0.8, ("b", "c"): 1.0}


def test_robustness_requires_atomic(ia):
    with pytest.raises(ValueError):
        robustness({}, new_qcn(ia, ["a", "b"]))


def test_missing_edge_warns_and_counts_zero(ia):
    q = atomic(ia, "ab", {(0, 1): "p"})
    with pytest.warns(MissingProbabilityWarning):
        rep = robustness({}, q)
    assert rep.robustness == 0.0


def test_robustness_flags_unsatisfiable(ia):
    q = atomic(ia, "abc", {(0, 1): "p", (1, 2): "p", (0, 2): "pi"})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert robustness({}, q).satisfiable is False


def test_scenario_derived_robustness_is_mean_frequency(rcc8):
    q = random_network(rcc8, 3, 1.0, 3, 11)
    pq = ProbabilisticQCN(q, edge_probabilities_from_scenarios(q), source="scenario-derived")
    freq = frequencies(q)
    for s in enumerate_scenarios(q):
        assert robustness(pq, s).robustness == pytest.approx(float(hand_robustness(freq, s)), abs=1e-12)


def test_max_robust_unique_scenario(ia):
    q = atomic(ia, "abc", {(0, 1): "p", (1, 2): "p", (0, 2): "p"})
    with pytest.warns(MissingProbabilityWarning):
        rep = max_robust_scenario(q, {(0, 1): {ia.index("p"): 0.1, ia.index("m"): 0.9}})
    assert rep.refinement == q


def test_max_robust_none_when_inconsistent():
    q = parse_network(FIXTURES / "ia_pp_pi.net").qcn
    assert max_robust_scenario(q, {}) is None


def test_yolk_egg_picks_contained(rcc8):
    pq = parse_network(DATA / "yolk_egg.net")
    rep = max_robust_scenario(pq.qcn, pq)
    assert rep.refinement["x", "y"] == rcc8.relation("NTPP")
    assert rep.per_edge_probability["x", "y"] == 0.45
    assert rep.robustness == pytest.approx((0.45 + 1 + 1) / 3, abs=1e-12)


def exhaustive_best(q, dist):
    best, value = None, None
    for s in enumerate_scenarios(q):
        r = hand_robustness(dist, s)
        if value is None or r > value:
            best, value = s, r
    return best


def random_dist(q, rng):
    dist = {}
    for i, j in q.pairs():
        rels = [b for b in range(q.calculus.size) if q.bits(i, j) >> b & 1]
        weights = [rng.randint(0, 5) for _ in rels]
        if not any(weights):
            weights[0] = 1
        total = sum(weights)
        dist[i, j] = {b: Fraction(w, total) for b, w in zip(rels, weights)}
    return dist


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["ia", "rcc8"]), st.integers(2, 4), st.integers(0, 10**6))
def test_max_robust_is_exhaustive_argmax(name, n, seed):
    rng = random.Random(seed)
    q = random_network(builtin(name), n, 0.7, 3, rng)
    dist = random_dist(q, rng)
    rep = max_robust_scenario(q, dist)
    best = exhaustive_best(q, dist)
    assert (rep is None) == (best is None)
    if best is not None:
        assert rep.refinement == best


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.fractions(min_value=Fraction(1, 10), max_value=10))
def test_argmax_invariant_under_rescaled_then_normalized_edge(seed, factor):
    rng = random.Random(seed)
    q = random_network(builtin("ia"), 3, 0.8, 3, rng)
    dist = random_dist(q, rng)
    edge = next(iter(dist))
    scaled = {b: p * factor for b, p in dist[edge].items()}
    total = sum(scaled.values())
    renormalized = dict(dist, **{}) | {edge: {b: p / total for b, p in scaled.items()}}
    a, b = max_robust_scenario(q, dist), max_robust_scenario(q, renormalized)
    assert (a is None and b is None) or a.refinement == b.refinement


def test_rectify_yolk_egg(rcc8):
    pq = parse_network(DATA / "yolk_egg.net")
    bg = parse_network(DATA / "yolk_egg_background.net").qcn
    out = rectify(pq, bg)
    assert out.named_edge(0, 1) == {"NTPP": 1.0}
    assert out.qcn["x", "y"] == rcc8.relation("NTPP")
    assert out.problems() == []
    assert out.qcn.refines(pq.qcn) and out.qcn.refines(bg)
    assert out.label_dist == pq.label_dist


def test_rectify_two_variable_yolk_egg(rcc8):
    q = set_constraint(new_qcn(rcc8, ["x", "y"]), 0, 1, rcc8.relation("NTPP", "PO"))
    pq = ProbabilisticQCN(q, {(0, 1): {rcc8.index("NTPP"): 0.45, rcc8.index("PO"): 0.55}})
    bg = set_constraint(new_qcn(rcc8, ["x", "y"]), 0, 1, rcc8.relation("NTPP"))
    assert rectify(pq, bg).named_edge(0, 1) == {"NTPP": 1.0}


def test_rectify_universal_background_is_noop(ia):
    q = set_constraint(new_qcn(ia, ["a", "b"]), 0, 1, ia.relation("p", "m"))
    pq = ProbabilisticQCN(q, {(0, 1): {ia.index("p"): 0.3, ia.index("m"): 0.7}})
    out = rectify(pq, new_qcn(ia, ["a", "b"]))
    assert out.edge_dist == pq.edge_dist and out.qcn == q


def test_rectify_contradiction_names_edge(ia):
    pq = ProbabilisticQCN(new_qcn(ia, ["a", "b"]), {(0, 1): {ia.index("p"): 1.0}})
    bg = set_constraint(new_qcn(ia, ["a", "b"]), 0, 1, ia.relation("pi"))
    with pytest.raises(ContradictionError) as info:
        rectify(pq, bg)
    assert info.value.edge == ("a", "b")


def test_rectify_disjoint_constraints_is_contradiction(ia):
    q = set_constraint(new_qcn(ia, ["a", "b"]), 0, 1, ia.relation("p"))
    pq = ProbabilisticQCN(q, {(0, 1): {ia.index("p"): 1.0}})
    bg = set_constraint(new_qcn(ia, ["a", "b"]), 0, 1, ia.relation("pi"))
    with pytest.raises(ContradictionError):
        rectify(pq, bg)


def test_rectify_inconsistent_background(ia):
    pq = ProbabilisticQCN(new_qcn(ia, ["a", "b", "c"]))
    bg = parse_network(FIXTURES / "ia_pp_pi.net").qcn
    bg = type(bg)(ia, ("a", "b", "c"), "bg", [row[:] for row in bg._m])
    with pytest.raises(NoScenarioError):
        rectify(pq, bg)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_rectify_output_invariants(seed):
    rng = random.Random(seed)
    rcc8 = builtin("rcc8")
    evidence = random_network(rcc8, 3, 0.8, 4, rng)
    background = random_network(rcc8, 3, 0.5, 5, rng)
    pq = ProbabilisticQCN(evidence, random_dist(evidence, rng))
    try:
        out = rectify(pq, background)
    except (ContradictionError, NoScenarioError):
        return
    assert out.problems() == []
    assert out.qcn.refines(evidence) and out.qcn.refines(background)
    supports = minimal_supports(intersect_networks(evidence, background))
    for e, dist in out.edge_dist.items():
        assert all(supports[e] >> b & 1 for b, p in dist.items() if p > 0)
