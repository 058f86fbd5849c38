import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstr.algebra import (complement, compose, converse, intersect, is_atomic, iter_bits, union,
                          universal, Relation)
from qstr.calculi import builtin
from qstr.errors import CalculusMismatchError

CALCULI = [builtin("pa"), builtin("ia"), builtin("rcc8")]


def relations(calc):
    return st.integers(0, calc.universal_bits).map(lambda b: Relation(b, calc))


calc_and_three = st.sampled_from(CALCULI).flatmap(
    lambda c: st.tuples(relations(c), relations(c), relations(c)))


def test_converse_of_precedes(ia):
    assert converse(ia.relation("p")) == ia.relation("pi")


def test_converse_empty(ia):
    assert converse(ia.empty()) == ia.empty()


def test_converse_rcc8_pair(rcc8):
    assert converse(rcc8.relation("TPP", "EC")) == rcc8.relation("TPPi", "EC")


def test_compose_inside_chain(rcc8):
    ntpp = rcc8.relation("NTPP")
    assert compose(ntpp, ntpp) == ntpp


def test_compose_identity(ia):
    r = ia.relation("p", "o", "di")
    assert compose(ia.relation("eq"), r) == r
    assert compose(r, ia.relation("eq")) == r


def test_compose_precedes_precedes(ia):
    assert compose(ia.relation("p"), ia.relation("p")) == ia.relation("p")


def test_set_operations(ia, rcc8):
    assert intersect(ia.relation("p", "m", "o"), ia.relation("m", "o", "s")) == ia.relation("m", "o")
    assert complement(universal(ia)) == ia.empty()
    assert is_atomic(rcc8.relation("EC"))
    assert not is_atomic(rcc8.relation("EC", "PO"))
    assert not is_atomic(rcc8.empty())
    assert union(ia.relation("p"), ia.relation("m")) == ia.relation("p", "m")


def test_mixed_calculi_rejected(ia, rcc8):
    with pytest.raises(CalculusMismatchError):
        compose(ia.relation("p"), rcc8.relation("DC"))
    with pytest.raises(CalculusMismatchError):
        intersect(ia.relation("p"), rcc8.relation("DC"))


def test_relation_accessors(ia):
    r = ia.relation("o", "p")
    assert r.names == ["p", "o"]
    assert len(r) == 2 and "o" in r and "m" not in r
    assert repr(r) == "{p, o}"
    with pytest.raises(ValueError):
        Relation(1 << 13, ia)


def test_iter_bits():
    assert list(iter_bits(0b101001)) == [0, 3, 5]
    assert list(iter_bits(0)) == []


@settings(max_examples=300, deadline=None)
@given(calc_and_three)
def test_algebra_laws(rst):
    r, s, t = rst
    assert converse(converse(r)) == r
    assert converse(compose(r, s)) == compose(converse(s), converse(r))
    assert compose(union(r, s), t) == union(compose(r, t), compose(s, t))
    assert compose(t, union(r, s)) == union(compose(t, r), compose(t, s))
    assert compose(r.calculus.empty(), r) == r.calculus.empty()
    assert compose(r, r.calculus.empty()) == r.calculus.empty()
    # Boolean lattice
    assert intersect(r, union(r, s)) == r
    assert union(r, intersect(r, s)) == r
    assert complement(complement(r)) == r
    assert complement(union(r, s)) == intersect(complement(r), complement(s))


@settings(max_examples=200, deadline=None)
@given(calc_and_three)
def test_compose_monotone(rst):
    r, s, t = rst
    small = intersect(r, s)
    assert compose(small, t) <= compose(r, t)
    assert compose(t, small) <= compose(t, r)
