"""Reading and writing network files.

Format (one directive per line, ``#`` starts a comment)::

    network <name> calculus <calcname>
    vars <v1> <v2> ... <vn>
    <vi> <vj> ( <r1> <r2> ... )
    prob <vi> <vj> { <r>:<p> ... }
    label <vi> { <name>:<p> ... }

Pairs without a constraint line are universal. Repeated constraint lines for
one pair are intersected. Probabilities are decimals (``0.45``) or exact
fractions (``1/13``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .algebra import Calculus
from .calculi import find_calculus
from .errors import ParseError, QstrError
from .network import QCN
from .probabilistic import Prob, ProbabilisticQCN, format_probability

_TOKEN = re.compile(r"[(){}]|[^\s(){}]+")


def _tokens(line: str) -> list[tuple[str, int]]:
    code = line.split("#", 1)[0]
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(code)]


def _prob(text: str) -> Prob:
    if "/" in text:
        value = Fraction(text)
    else:
        value = float(text)
    if not 0 <= value <= 1:
        raise ValueError(f"probability {text} outside [0, 1]")
    return value


def parse_network_text(text: str, path: str | None = None, *,
                       calculus: Calculus | None = None,
                       resolve: Callable[[str], Calculus] = find_calculus) -> ProbabilisticQCN:
    """Parse a network file. ``calculus`` overrides the one named in the header."""
    qcn: QCN | None = None
    constraint_lines: list[tuple[int, int, int, int]] = []
    prob_lines: list[tuple[int, int, int, dict[int, Prob], int]] = []
    labels: dict[int, dict[str, Prob]] = {}
    header = None

    def fail(msg, lineno, col=None):
        raise ParseError(msg, path, lineno, col)

    def var(tok_col, lineno) -> int:
        tok, col = tok_col
        if tok not in qcn._index:
            fail(f"unknown variable {tok!r}", lineno, col)
        return qcn._index[tok]

    def block(toks, start, open_, close, lineno):
        if len(toks) <= start or toks[start][0] != open_ or toks[-1][0] != close:
            fail(f"expected '{open_} ... {close}'", lineno, toks[min(start, len(toks) - 1)][1])
        return toks[start + 1:-1]

    def dist_entries(items, lineno, what):
        out = []
        for tok, col in items:
            key, sep, value = tok.rpartition(":")
            if not sep or not key:
                fail(f"malformed {what} entry {tok!r}, expected <name>:<p>", lineno, col)
            try:
                out.append((key, _prob(value), col))
            except (ValueError, ZeroDivisionError) as exc:
                fail(f"malformed probability in {tok!r}: {exc}", lineno, col)
        return out

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        key, col = toks[0]
        if header is None:
            if key != "network" or len(toks) != 4 or toks[2][0] != "calculus":
                fail("expected: network <name> calculus <calcname>", lineno, col)
            header = (toks[1][0], toks[3][0])
            if calculus is None:
                try:
                    calculus = resolve(header[1])
                except QstrError as exc:
                    fail(str(exc), lineno, toks[3][1])
            continue
        if qcn is None:
            if key != "vars":
                fail("expected: vars <v1> ... <vn>", lineno, col)
            names = [t for t, _ in toks[1:]]
            try:
                qcn = QCN(calculus, names, header[0])
            except ValueError as exc:
                fail(str(exc), lineno, col)
            continue
        if key == "prob":
            if len(toks) < 5:
                fail("expected: prob <vi> <vj> { <r>:<p> ... }", lineno, col)
            i, j = var(toks[1], lineno), var(toks[2], lineno)
            if i == j:
                fail("probability block on a diagonal pair", lineno, toks[2][1])
            dist: dict[int, Prob] = {}
            for name, p, c in dist_entries(block(toks, 3, "{", "}", lineno), lineno, "probability"):
                if name not in calculus._index:
                    fail(f"relation {name!r} is not a base relation of {calculus.name}", lineno, c)
                b = calculus.index(name)
                if b in dist:
                    fail(f"duplicate relation {name!r} in probability block", lineno, c)
                dist[b] = p
            prob_lines.append((lineno, i, j, dist, col))
        elif key == "label":
            if len(toks) < 4:
                fail("expected: label <vi> { <name>:<p> ... }", lineno, col)
            i = var(toks[1], lineno)
            if i in labels:
                fail(f"duplicate label block for {toks[1][0]!r}", lineno, col)
            labels[i] = {}
            for name, p, c in dist_entries(block(toks, 2, "{", "}", lineno), lineno, "label"):
                if name in labels[i]:
                    fail(f"duplicate label {name!r}", lineno, c)
                labels[i][name] = p
        else:
            if len(toks) < 4:
                fail("expected: <vi> <vj> ( <r1> ... )", lineno, col)
            i, j = var(toks[0], lineno), var(toks[1], lineno)
            bits = 0
            for name, c in block(toks, 2, "(", ")", lineno):
                if name not in calculus._index:
                    fail(f"relation {name!r} is not a base relation of {calculus.name}", lineno, c)
                bits |= 1 << calculus.index(name)
            if i == j:
                if not bits & calculus.identity_bits:
                    fail("diagonal constraint must contain the identity relation", lineno, col)
                continue
            constraint_lines.append((lineno, i, j, bits))

    if header is None:
        fail("empty network file", 1)
    if qcn is None:
        fail("missing 'vars' line", len(text.splitlines()) + 1)

    for _, i, j, bits in constraint_lines:
        qcn._set(i, j, qcn.bits(i, j) & bits)

    edge_dist = {}
    for lineno, i, j, dist, col in prob_lines:
        if i > j:
            i, j = j, i
            dist = {calculus.converse[b]: p for b, p in dist.items()}
        if (i, j) in edge_dist:
            fail("duplicate probability block for this pair", lineno, col)
        edge_dist[i, j] = dict(sorted(dist.items()))
    pq = ProbabilisticQCN(qcn, edge_dist, labels)
    for problem in pq.problems():
        # report against the first line that mentions the pair when possible
        line = next((ln for ln, i, j, _, _ in prob_lines
                     if f"({qcn.variables[min(i, j)]}, {qcn.variables[max(i, j)]})" in problem), None)
        fail(f"malformed probability block: {problem}", line)
    return pq


def parse_network(path, *, calculus: Calculus | None = None) -> ProbabilisticQCN:
    path = Path(path)
    return parse_network_text(path.read_text(encoding="utf-8"), str(path), calculus=calculus)


def format_network(net: QCN | ProbabilisticQCN) -> str:
    """Canonical text of a network: constraints, then probabilities, then labels."""
    pq = net if isinstance(net, ProbabilisticQCN) else ProbabilisticQCN(net)
    q = pq.qcn
    calc = q.calculus
    v = q.variables
    lines = [f"network {q.name} calculus {calc.name}", "vars " + " ".join(v)]
    for i, j in q.pairs():
        bits = q.bits(i, j)
        if bits != calc.universal_bits:
            lines.append(f"{v[i]} {v[j]} ( {' '.join(calc.names_of(bits))} )")
    for (i, j), dist in sorted(pq.edge_dist.items()):
        body = " ".join(f"{calc.base_relations[b]}:{format_probability(p)}" for b, p in sorted(dist.items()))
        lines.append(f"prob {v[i]} {v[j]} {{ {body} }}")
    for i, dist in sorted(pq.label_dist.items()):
        body = " ".join(f"{name}:{format_probability(p)}" for name, p in dist.items())
        lines.append(f"label {v[i]} {{ {body} }}")
    return "\n".join(lines) + "\n"


def write_network(net: QCN | ProbabilisticQCN, path) -> None:
    Path(path).write_text(format_network(net), encoding="utf-8")
