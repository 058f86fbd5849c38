"""Text exports for answer-set and neuro-symbolic toolchains.

Only facts are emitted; integrity rules and the program that consumes them
are left to the user. Names are turned into ASP constants by
``asp_identifiers``: lowercase, ``[a-z0-9_]`` only, starting with a letter.
The symbols ``<``, ``=`` and ``>`` become ``lt``, ``eq`` and ``gt``; other
characters become ``_`` followed by their code point in hex. Any name that
would collide with an earlier one gets the suffix ``_<position>``, so the
mapping is injective for every name list.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import iter_bits
from .network import QCN
from .probabilistic import ProbabilisticQCN, format_probability

_SYMBOLS = {"<": "lt", "=": "eq", ">": "gt"}
_SAFE = re.compile(r"[a-z0-9_]")


def asp_name(name: str) -> str:
    parts = []
    for ch in name:
        low = ch.lower()
        if _SAFE.fullmatch(low):
            parts.append(low)
        elif ch in _SYMBOLS:
            parts.append(_SYMBOLS[ch])
        else:
            parts.append(f"_{ord(ch):x}")
    out = "".join(parts) or "_"
    if not out[0].isalpha():
        out = "r" + out
    return out


def asp_identifiers(names: Sequence[str]) -> list[str]:
    """Injective mapping of ``names`` to ASP constants, in order."""
    out: list[str] = []
    seen: set[str] = set()
    for k, name in enumerate(names):
        ident = asp_name(name)
        while ident in seen:
            ident = f"{ident}_{k}"
        seen.add(ident)
        out.append(ident)
    return out


@dataclass
class AtomDocument:
    header: list[str] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    def text(self) -> str:
        return "".join(f"% {h}\n" for h in self.header) + "".join(f"{ln}\n" for ln in self.lines)


def to_neurasp_atoms(pq: ProbabilisticQCN) -> AtomDocument:
    """``nn(region(1, V), [...])`` per labelled variable and one
    ``nn(network(|C|, N), [true, false])`` atom for the network."""
    q = pq.qcn
    calc = q.calculus
    vars_ = asp_identifiers(q.variables)
    rels = asp_identifiers(calc.base_relations)
    doc = AtomDocument([f"network {q.name}", f"calculus {calc.name}", f"source {pq.source}"])
    for i in range(q.n):
        dist = pq.label_dist.get(i)
        if not dist:
            continue
        ranked = sorted(dist, key=lambda label: -dist[label])
        doc.lines.append(f"nn(region(1, {vars_[i]}), [{', '.join(asp_identifiers(ranked))}]).")
    doc.lines.append(f"nn(network({q.non_universal_count()}, {asp_name(q.name)}), [true, false]).")
    for (i, j), dist in sorted(pq.edge_dist.items()):
        body = " ".join(f"{rels[b]}={format_probability(p)}" for b, p in sorted(dist.items()))
        doc.lines.append(f"% prob({vars_[i]}, {vars_[j]}): {body}")
    return doc


def to_asp_facts(qcn: QCN) -> AtomDocument:
    """Variables, per-direction possible relations, and the calculus tables as facts."""
    calc = qcn.calculus
    vars_ = asp_identifiers(qcn.variables)
    rels = asp_identifiers(calc.base_relations)
    doc = AtomDocument([f"network {qcn.name}", f"calculus {calc.name}",
                        "facts only: var/1, possible/3, base/1, identity/1, converse/2, composition/3"])
    doc.lines += [f"var({v})." for v in vars_]
    for i in range(qcn.n):
        for j in range(qcn.n):
            if i != j:
                doc.lines += [f"possible({vars_[i]}, {vars_[j]}, {rels[b]})."
                              for b in iter_bits(qcn.bits(i, j))]
    doc.lines += [f"base({r})." for r in rels]
    doc.lines.append(f"identity({rels[calc.identity]}).")
    doc.lines += [f"converse({rels[k]}, {rels[calc.converse[k]]})." for k in range(calc.size)]
    for a in range(calc.size):
        for b in range(calc.size):
            doc.lines += [f"composition({rels[a]}, {rels[b]}, {rels[c]})."
                          for c in iter_bits(calc.composition[a][b])]
    return doc

