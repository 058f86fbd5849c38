"""Built-in calculi, the calculus-definition file format, and table validation."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..algebra import Calculus, iter_bits
from ..errors import ParseError, UnknownCalculusError
from .opra import OpraRelation, opra_converse
from .interval import derive_ia_table

__all__ = [
    "BUILTIN_NAMES", "OpraRelation", "Violation", "builtin", "derive_ia_table", "dump_calculus",
    "find_calculus", "load_calculus", "opra_converse", "parse_calculus", "validate_calculus",
]

BUILTIN_NAMES = ("pa", "ia", "rcc8")
CALCULUS_PATH_ENV = "QSTR_CALCULUS_PATH"

_TOKEN = re.compile(r"[()]|[^\s()]+")
_DOMAIN = re.compile(r'^domain\s+"([^"]*)"\s*(?:#.*)?$')


def _tokens(line: str) -> list[tuple[str, int]]:
    code = line.split("#", 1)[0]
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(code)]


def parse_calculus(text: str, path: str | None = None, *,
                   atomic_closure_decides: bool = False) -> Calculus:
    """Parse a calculus definition.

    Raises ParseError on syntax errors, unknown relation names, duplicate
    entries, or an incomplete converse/composition table. Algebraic laws are
    not checked here; see validate_calculus.
    """
    name = domain = None
    relations: list[str] | None = None
    identity = None
    converse: dict[str, str] = {}
    compose: dict[tuple[str, str], list[str]] = {}
    index: dict[str, int] = {}

    def fail(msg, lineno, col=None):
        raise ParseError(msg, path, lineno, col)

    def known(tok, lineno, col):
        if tok not in index:
            fail(f"unknown relation {tok!r}", lineno, col)
        return tok

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        key, col = toks[0]
        if key == "calculus":
            if name is not None:
                fail("duplicate 'calculus' line", lineno, col)
            if len(toks) != 2:
                fail("expected: calculus <name>", lineno, col)
            name = toks[1][0]
            continue
        if name is None:
            fail("file must start with 'calculus <name>'", lineno, col)
        if key == "domain":
            m = _DOMAIN.match(raw.strip())
            if not m:
                fail('expected: domain "<free text>"', lineno, col)
            domain = m.group(1)
        elif key == "relations":
            if relations is not None:
                fail("duplicate 'relations' line", lineno, col)
            relations = [t for t, _ in toks[1:]]
            if not relations:
                fail("no base relations given", lineno, col)
            for t, c in toks[1:]:
                if t in index:
                    fail(f"duplicate base relation {t!r}", lineno, c)
                index[t] = len(index)
            if len(relations) > 64:
                fail("at most 64 base relations are supported", lineno, col)
        elif relations is None:
            fail(f"'{key}' before 'relations' line", lineno, col)
        elif key == "identity":
            if len(toks) != 2:
                fail("expected: identity <relation>", lineno, col)
            identity = known(toks[1][0], lineno, toks[1][1])
        elif key == "converse":
            if len(toks) != 3:
                fail("expected: converse <r> <rconv>", lineno, col)
            a = known(toks[1][0], lineno, toks[1][1])
            if a in converse:
                fail(f"duplicate converse for {a!r}", lineno, toks[1][1])
            converse[a] = known(toks[2][0], lineno, toks[2][1])
        elif key == "compose":
            words = [t for t, _ in toks]
            if len(toks) < 6 or words[3] != "=" or words[4] != "(" or words[-1] != ")":
                fail("expected: compose <r1> <r2> = ( <s1> ... )", lineno, col)
            a = known(toks[1][0], lineno, toks[1][1])
            b = known(toks[2][0], lineno, toks[2][1])
            if (a, b) in compose:
                fail(f"duplicate composition entry ({a}, {b})", lineno, col)
            compose[a, b] = [known(t, lineno, c) for t, c in toks[5:-1]]
        else:
            fail(f"unknown directive {key!r}", lineno, col)

    end = len(text.splitlines()) + 1
    if name is None:
        fail("empty calculus definition", end)
    if relations is None:
        fail("missing 'relations' line", end)
    if identity is None:
        fail("missing 'identity' line", end)
    missing_conv = [r for r in relations if r not in converse]
    if missing_conv:
        fail(f"incomplete converse table: no entry for {', '.join(missing_conv)}", end)
    missing = [f"({a},{b})" for a in relations for b in relations if (a, b) not in compose]
    if missing:
        shown = " ".join(missing[:5]) + (" ..." if len(missing) > 5 else "")
        fail(f"incomplete composition table: missing {shown}", end)

    table = tuple(
        tuple(sum(1 << index[c] for c in set(compose[a, b])) for b in relations)
        for a in relations)
    return Calculus(name, domain or "", tuple(relations), index[identity],
                    tuple(index[converse[r]] for r in relations), table, atomic_closure_decides)


def load_calculus(path, *, atomic_closure_decides: bool = False) -> Calculus:
    path = Path(path)
    return parse_calculus(path.read_text(encoding="utf-8"), str(path),
                          atomic_closure_decides=atomic_closure_decides)


def dump_calculus(c: Calculus) -> str:
    """Serialize a calculus in the definition-file format."""
    names = c.base_relations
    lines = [f"calculus {c.name}", f'domain "{c.domain_description}"',
             "relations " + " ".join(names), f"identity {names[c.identity]}"]
    lines += [f"converse {names[k]} {names[c.converse[k]]}" for k in range(c.size)]
    for a in range(c.size):
        lines.append("")
        for b in range(c.size):
            lines.append(f"compose {names[a]} {names[b]} = ( {' '.join(c.names_of(c.composition[a][b]))} )")
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def builtin(name: str) -> Calculus:
    """Return one of the shipped calculi: ``pa``, ``ia`` or ``rcc8``."""
    if name not in BUILTIN_NAMES:
        raise UnknownCalculusError(f"unknown built-in calculus {name!r} (known: {', '.join(BUILTIN_NAMES)})")
    text = resources.files(__package__).joinpath("data", f"{name}.cal").read_text(encoding="utf-8")
    return parse_calculus(text, f"<builtin {name}.cal>", atomic_closure_decides=True)


def find_calculus(name: str) -> Calculus:
    """Resolve a calculus by built-in name, by file path, or by ``<name>.cal``
    in the directories listed in ``QSTR_CALCULUS_PATH``."""
    if name in BUILTIN_NAMES:
        return builtin(name)
    if name.endswith(".cal") and os.path.isfile(name):
        return load_calculus(name)
    for directory in os.environ.get(CALCULUS_PATH_ENV, "").split(os.pathsep):
        if directory:
            candidate = Path(directory) / f"{name}.cal"
            if candidate.is_file():
                return load_calculus(candidate)
    raise UnknownCalculusError(f"unknown calculus {name!r}")


@dataclass(frozen=True)
class Violation:
    law: str
    detail: str

    def __str__(self):
        return f"{self.law}: {self.detail}"


def validate_calculus(c: Calculus) -> list[Violation]:
    """Check the algebraic laws every calculus must satisfy.

    Returns one Violation per offending entry; an empty list means the
    tables are well formed.
    """
    names = c.base_relations
    n = c.size
    out: list[Violation] = []

    def fmt(mask):
        return "{" + " ".join(c.names_of(mask)) + "}"

    for k in range(n):
        if c.converse[c.converse[k]] != k:
            out.append(Violation("converse not an involution",
                                 f"{names[k]} -> {names[c.converse[k]]} -> {names[c.converse[c.converse[k]]]}"))
    if c.converse[c.identity] != c.identity:
        out.append(Violation("converse of identity is not identity",
                             f"{names[c.identity]} -> {names[c.converse[c.identity]]}"))
    for a in range(n):
        for b in range(n):
            if c.composition[a][b] >> n:
                out.append(Violation("composition entry out of range", f"({names[a]}, {names[b]})"))
    ident = c.identity
    for b in range(n):
        if c.composition[ident][b] != 1 << b:
            out.append(Violation("identity law violated",
                                 f"{names[ident]} o {names[b]} = {fmt(c.composition[ident][b])}, expected {{{names[b]}}}"))
        if c.composition[b][ident] != 1 << b:
            out.append(Violation("identity law violated",
                                 f"{names[b]} o {names[ident]} = {fmt(c.composition[b][ident])}, expected {{{names[b]}}}"))
    for a in range(n):
        for b in range(n):
            lhs = 0
            for k in iter_bits(c.composition[a][b]):
                lhs |= 1 << c.converse[k]
            rhs = c.composition[c.converse[b]][c.converse[a]]
            if lhs != rhs:
                out.append(Violation("converse not matching duality",
                                     f"({names[a]} o {names[b]})^-1 = {fmt(lhs)} but "
                                     f"{names[c.converse[b]]} o {names[c.converse[a]]} = {fmt(rhs)}"))
    return out
