from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstr.algebra import Relation, converse
from qstr.calculi import builtin
from qstr.errors import CalculusMismatchError, ParseError
from qstr.generate import parse_model, random_network
from qstr.io import format_network, parse_network, parse_network_text, write_network
from qstr.network import QCN, audit, new_qcn, refine, set_constraint, to_dot

from conftest import DATA, FIXTURES


def test_new_qcn_is_universal(ia):
    q = new_qcn(ia, ["A", "B", "C"])
    assert q["A", "B"] == ia.universal()
    assert q[0, 0] == ia.relation("eq")
    assert audit(q) == []


def test_single_variable(rcc8):
    q = new_qcn(rcc8, ["x"])
    assert q.n == 1 and list(q.pairs()) == [] and q[0, 0] == rcc8.relation("EQ")


def test_duplicate_variables(ia):
    with pytest.raises(ValueError, match="duplicate"):
        new_qcn(ia, ["a", "b", "a"])


def test_set_constraint_writes_converse(ia):
    q = set_constraint(new_qcn(ia, ["A", "B", "C"]), "B", "C", ia.relation("p"))
    assert q["C", "B"] == ia.relation("pi")
    assert audit(q) == []


def test_set_constraint_diagonal(ia):
    q = new_qcn(ia, ["A", "B"])
    with pytest.raises(ValueError):
        set_constraint(q, "A", "A", ia.relation("p"))
    assert set_constraint(q, "A", "A", ia.relation("eq")) == q


def test_set_constraint_empty_flags_inconsistency(ia):
    q = set_constraint(new_qcn(ia, ["A", "B"]), 0, 1, ia.empty())
    assert q.trivially_inconsistent


def test_set_constraint_wrong_calculus(ia, rcc8):
    with pytest.raises(CalculusMismatchError):
        set_constraint(new_qcn(ia, ["A", "B"]), 0, 1, rcc8.relation("DC"))


def test_operations_do_not_mutate(ia):
    q = new_qcn(ia, ["A", "B"])
    set_constraint(q, 0, 1, ia.relation("p"))
    refine(q, 0, 1, ia.relation("m"))
    assert q[0, 1] == ia.universal()


def test_refine_examples(rcc8, ia):
    q = new_qcn(rcc8, ["x", "y"])
    assert refine(q, 0, 1, rcc8.relation("NTPP"))[0, 1] == rcc8.relation("NTPP")
    q = set_constraint(q, 0, 1, rcc8.relation("NTPP", "PO"))
    assert refine(q, 0, 1, rcc8.relation("PO"))[0, 1] == rcc8.relation("PO")
    p = set_constraint(new_qcn(ia, ["a", "b"]), 0, 1, ia.relation("p"))
    assert refine(p, 0, 1, ia.relation("m"))[0, 1] == ia.empty()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**13 - 1), st.integers(0, 2**13 - 1), st.integers(0, 2**13 - 1))
def test_refine_idempotent_and_order_free(a, b, c):
    ia = builtin("ia")
    q = set_constraint(new_qcn(ia, ["x", "y"]), 0, 1, Relation(a, ia))
    r, s = Relation(b, ia), Relation(c, ia)
    once = refine(q, 0, 1, r)
    assert refine(once, 0, 1, r) == once
    # refining (y, x) with s^-1 is refining (x, y) with s
    assert refine(refine(q, 0, 1, r), 1, 0, converse(s)) == refine(refine(q, 0, 1, s), 0, 1, r)
    assert audit(once) == []
    assert once.refines(q)


def test_to_dot_figure2():
    q = parse_network(DATA / "figure2.net").qcn
    dot = to_dot(q)
    edges = [l for l in dot.splitlines() if "->" in l]
    assert edges == ['  "A" -> "B" [label="p|pi"];', '  "B" -> "C" [label="p"];']
    assert dot.startswith('digraph "figure2" {')


def test_parse_figure2(ia):
    pq = parse_network(DATA / "figure2.net")
    q = pq.qcn
    assert q.variables == ("A", "B", "C")
    assert q["A", "B"] == ia.relation("p", "pi")
    assert q["C", "B"] == ia.relation("pi")
    assert q["A", "C"] == ia.universal()
    assert pq.edge_dist == {} and pq.label_dist == {}


def test_parse_yolk_egg(rcc8):
    pq = parse_network(DATA / "yolk_egg.net")
    assert pq.named_edge(0, 1) == {"PO": 0.55, "NTPP": 0.45}
    assert pq.named_edge(1, 0) == {"PO": 0.55, "NTPPi": 0.45}
    assert pq.label_dist == {0: {"yolk": 0.95}, 1: {"egg": 0.9}, 2: {"contents": 1.0}}
    assert pq.problems() == []


def test_reversed_probability_block_is_stored_canonically(ia):
    pq = parse_network(FIXTURES / "ia_reversed_prob.net")
    assert pq.named_edge(0, 1) == {"p": 0.5, "m": 0.25, "o": 0.25}


def test_fraction_probabilities():
    pq = parse_network(FIXTURES / "ia_fractions.net")
    assert pq.named_edge(0, 1) == {"p": Fraction(2, 3), "m": Fraction(1, 3)}
    assert "p:2/3 m:1/3" in format_network(pq)


def test_repeated_constraint_lines_intersect(rcc8):
    q = parse_network(FIXTURES / "rcc8_duplicate_lines.net").qcn
    assert q["a", "b"] == rcc8.relation("EC", "PO")


@pytest.mark.parametrize("text, line, message", [
    ("network n calculus ia\nvars A B\nA B ( inside )\n", 3, "'inside' is not a base relation of ia"),
    ("network n calculus nope\nvars A\n", 1, "unknown calculus"),
    ("network n calculus ia\nvars A B\nA Q ( p )\n", 3, "unknown variable 'Q'"),
    ("network n calculus ia\nvars A B\nprob A B { p:0.5 }\n", 3, "sum to"),
    ("network n calculus ia\nvars A B\nA B ( p )\nprob A B { p:0.5 m:0.5 }\n", 4, "outside its constraint"),
    ("network n calculus ia\nvars A B\nprob A B { p=1 }\n", 3, "malformed probability entry"),
    ("network n calculus ia\nvars A B\nprob A B { p:1.5 }\n", 3, "outside"),
    ("network n calculus ia\nvars A B\nlabel A { x:0.7 y:0.7 }\n", None, "sum to more than 1"),
    ("network n calculus ia\nvars A A\n", 2, "duplicate variable"),
    ("vars A\n", 1, "expected: network"),
    ("network n calculus ia\nvars A B\nA B p\n", 3, "expected"),
])
def test_parse_errors(text, line, message):
    with pytest.raises(ParseError, match=message) as info:
        parse_network_text(text, "t.net")
    assert info.value.line == line


def test_calculus_override(pa):
    pq = parse_network_text("network n calculus ia\nvars a b\na b ( < )\n", calculus=pa)
    assert pq.qcn.calculus == pa


def test_write_then_parse(tmp_path, rcc8):
    q = set_constraint(new_qcn(rcc8, ["x", "y", "z"], "w"), "x", "z", rcc8.relation("TPP", "EQ"))
    path = tmp_path / "w.net"
    write_network(q, path)
    assert parse_network(path).qcn == q


def test_generator_reproducible(ia):
    assert parse_model("A(5, 0.5, 3)") == (5, 0.5, 3.0)
    with pytest.raises(ValueError):
        parse_model("B(5,0.5,3)")
    a = random_network(ia, 6, 0.5, 3, 42)
    b = random_network(ia, 6, 0.5, 3, 42)
    assert a == b and audit(a) == []
    assert not a.trivially_inconsistent
