"""Command-line front end (``qstr``).

Every subcommand builds one result dictionary. ``--json`` prints it as
JSON; otherwise it is rendered as text, so both modes carry the same
information. Exit codes: 0 success/consistent, 1 inconsistent/UNSAT/no
scenario/contradiction or calculus violations, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path
from typing import Callable

from . import __version__
from .calculi import find_calculus, load_calculus, validate_calculus
from .errors import ContradictionError, NoScenarioError, QstrError
from .export import to_asp_facts, to_neurasp_atoms
from .generate import parse_model, random_network
from .io import format_network, parse_network
from .network import QCN, intersect_networks, to_dot
from .probabilistic import (MissingProbabilityWarning, ProbabilisticQCN, RobustnessReport,
                            edge_probabilities_from_scenarios, format_probability,
                            max_robust_scenario, rectify, robustness)
from .solver import a_closure, enumerate_scenarios, solve

log = logging.getLogger("qstr")

CAVEAT = ("calculus {name} is not known to be decided by closure of atomic networks; "
          "results are closure-consistent refinements, not proven satisfiable")


class UsageError(Exception):
    pass


# JSON builders ------------------------------------------------------------

def network_json(q: QCN) -> dict:
    calc = q.calculus
    return {
        "name": q.name,
        "calculus": calc.name,
        "variables": list(q.variables),
        "constraints": [
            {"from": q.variables[i], "to": q.variables[j], "relations": calc.names_of(q.bits(i, j))}
            for i, j in q.pairs() if q.bits(i, j) != calc.universal_bits
        ],
    }


def report_json(r: RobustnessReport) -> dict:
    q = r.refinement
    return {
        "robustness": r.robustness,
        "satisfiable": r.satisfiable,
        "edges": [
            {"from": a, "to": b, "relation": q[a, b].names[0], "probability": p}
            for (a, b), p in r.per_edge_probability.items()
        ],
        "scenario": network_json(q),
    }


def edges_json(pq: ProbabilisticQCN) -> list[dict]:
    v = pq.qcn.variables
    names = pq.qcn.calculus.base_relations
    return [
        {"from": v[i], "to": v[j],
         "probabilities": {names[b]: float(p) for b, p in sorted(dist.items())},
         "exact": {names[b]: format_probability(p) for b, p in sorted(dist.items())}}
        for (i, j), dist in sorted(pq.edge_dist.items())
    ]


def caveat_for(q: QCN) -> str | None:
    return None if q.calculus.atomic_closure_decides else CAVEAT.format(name=q.calculus.name)


# text renderers -----------------------------------------------------------

def network_text(d: dict) -> list[str]:
    lines = [f"network {d['name']} calculus {d['calculus']}", "vars " + " ".join(d["variables"])]
    lines += [f"{c['from']} {c['to']} ( {' '.join(c['relations'])} )" for c in d["constraints"]]
    return lines


def report_text(d: dict) -> list[str]:
    lines = [f"robustness {d['robustness']!r}", f"satisfiable {'yes' if d['satisfiable'] else 'no'}"]
    lines += [f"edge {e['from']} {e['to']} {e['relation']} {e['probability']!r}" for e in d["edges"]]
    return lines + network_text(d["scenario"])


def render_text(d: dict) -> str:
    cmd = d["command"]
    lines: list[str] = []
    if d.get("caveat"):
        lines.append(f"# note: {d['caveat']}")
    if cmd == "check":
        lines.append("CONSISTENT" if d["consistent"] else "INCONSISTENT")
        lines.append(f"revisions {d['revisions']}")
        lines += network_text(d["network"])
    elif cmd == "solve":
        if d["scenario"] is None:
            lines.append("UNSAT")
        else:
            lines.append("SAT")
            lines += network_text(d["scenario"])
    elif cmd == "scenarios":
        lines.append(f"scenarios {d['count']}")
        for k, s in enumerate(d["scenarios"], 1):
            lines.append(f"# scenario {k}")
            lines += network_text(s)
    elif cmd == "probs":
        lines += network_text(d["network"])
        for e in d["edges"]:
            body = " ".join(f"{r}:{p}" for r, p in e["exact"].items())
            lines.append(f"prob {e['from']} {e['to']} {{ {body} }}")
    elif cmd in ("robustness", "maxrobust"):
        if d["result"] is None:
            lines.append("UNSAT")
        else:
            lines += report_text(d["result"])
    elif cmd == "rectify":
        lines.append(d["text"].rstrip("\n"))
    elif cmd == "export":
        lines.append(d["text"].rstrip("\n"))
    elif cmd == "validate-calculus":
        lines.append("OK" if not d["violations"] else f"{len(d['violations'])} violation(s)")
        lines += d["violations"]
    elif cmd == "gen":
        lines.append(d["text"].rstrip("\n"))
    return "\n".join(lines) + "\n"


# commands -----------------------------------------------------------------

def _calculus_override(args):
    if getattr(args, "calculus", None):
        return find_calculus(args.calculus)
    return None


def _load(path, args) -> ProbabilisticQCN:
    return parse_network(path, calculus=_calculus_override(args))


def _edge_source(pq: ProbabilisticQCN, qcn: QCN) -> ProbabilisticQCN:
    """Probabilities from the file, or scenario-derived when the file has none."""
    if pq.edge_dist:
        return pq
    return ProbabilisticQCN(qcn, edge_probabilities_from_scenarios(qcn), source="scenario-derived")


def cmd_check(args) -> tuple[dict, int]:
    q = _load(args.network, args).qcn
    res = a_closure(q)
    return ({"command": "check", "caveat": caveat_for(q), "consistent": res.consistent,
             "revisions": res.revisions, "network": network_json(res.closed_network)},
            0 if res.consistent else 1)


def cmd_solve(args):
    q = _load(args.network, args).qcn
    s = solve(q)
    return ({"command": "solve", "caveat": caveat_for(q),
             "scenario": None if s is None else network_json(s)}, 0 if s is not None else 1)


def cmd_scenarios(args):
    q = _load(args.network, args).qcn
    found = enumerate_scenarios(q, args.limit, jobs=args.jobs)
    return ({"command": "scenarios", "caveat": caveat_for(q), "count": len(found),
             "scenarios": [network_json(s) for s in found]}, 0 if found else 1)


def cmd_probs(args):
    q = _load(args.network, args).qcn
    pq = ProbabilisticQCN(q, edge_probabilities_from_scenarios(q), source="scenario-derived")
    return ({"command": "probs", "caveat": caveat_for(q), "network": network_json(q),
             "edges": edges_json(pq)}, 0)


def cmd_robustness(args):
    pq = _load(args.network, args)
    ref = _load(args.refinement, args).qcn
    if not ref.is_atomic():
        raise UsageError(f"{args.refinement}: refinement must be atomic")
    if ref.variables != pq.qcn.variables or ref.calculus != pq.qcn.calculus:
        raise UsageError(f"{args.refinement}: refinement is over different variables or calculus")
    if not ref.refines(pq.qcn):
        log.warning("refinement is not a refinement of %s", args.network)
    report = robustness(_edge_source(pq, pq.qcn), ref)
    return ({"command": "robustness", "caveat": caveat_for(ref), "result": report_json(report)}, 0)


def cmd_maxrobust(args):
    pq = _load(args.network, args)
    q = pq.qcn
    if args.background:
        q = intersect_networks(q, _load(args.background, args).qcn)
    dist = _edge_source(pq, q)
    report = max_robust_scenario(q, dist)
    return ({"command": "maxrobust", "caveat": caveat_for(q),
             "result": None if report is None else report_json(report)}, 0 if report else 1)


def cmd_rectify(args):
    pq = _load(args.network, args)
    out = rectify(pq, _load(args.background, args).qcn)
    return ({"command": "rectify", "caveat": caveat_for(pq.qcn), "network": network_json(out.qcn),
             "edges": edges_json(out), "text": format_network(out)}, 0)


def cmd_export(args):
    pq = _load(args.network, args)
    if args.format == "neurasp":
        text = to_neurasp_atoms(pq).text()
    elif args.format == "asp":
        text = to_asp_facts(pq.qcn).text()
    else:
        text = to_dot(pq.qcn)
    return {"command": "export", "format": args.format, "text": text}, 0


def cmd_validate(args):
    c = load_calculus(args.calculus_file)
    problems = [str(v) for v in validate_calculus(c)]
    return ({"command": "validate-calculus", "calculus": c.name, "violations": problems},
            1 if problems else 0)


def cmd_gen(args):
    try:
        n, d, l = parse_model(args.model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    calc = find_calculus(args.calculus or "ia")
    q = random_network(calc, n, d, l, args.seed, name=args.name)
    return {"command": "gen", "network": network_json(q), "text": format_network(q)}, 0


# argument parsing ---------------------------------------------------------

def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-o", "--output", help="write output to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--calculus", help="calculus name or .cal file overriding the network header")

    parser = argparse.ArgumentParser(prog="qstr", description="Qualitative constraint reasoning.")
    parser.add_argument("--version", action="version", version=f"qstr {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def add(name: str, fn: Callable, help_: str, network: bool = True):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        if network:
            p.add_argument("network", help="network file")
        p.set_defaults(func=fn)
        return p

    add("check", cmd_check, "run algebraic closure and report consistency")
    add("solve", cmd_solve, "find one scenario")
    p = add("scenarios", cmd_scenarios, "enumerate scenarios")
    p.add_argument("--limit", type=_positive, default=None, help="stop after K scenarios")
    p.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    add("probs", cmd_probs, "edge probabilities derived from scenario counts")
    p = add("robustness", cmd_robustness, "robustness of an atomic refinement")
    p.add_argument("--refinement", required=True, help="network file holding the atomic refinement")
    p = add("maxrobust", cmd_maxrobust, "most robust scenario")
    p.add_argument("--background", help="network file with hard background knowledge")
    p = add("rectify", cmd_rectify, "prune relation probabilities against background knowledge")
    p.add_argument("--background", required=True, help="network file with hard background knowledge")
    p = add("export", cmd_export, "export as NeurASP atoms, ASP facts or DOT")
    p.add_argument("--format", choices=("neurasp", "asp", "dot"), required=True)
    p = add("validate-calculus", cmd_validate, "check the laws of a calculus definition file",
            network=False)
    p.add_argument("calculus_file", help="calculus definition file")
    p = add("gen", cmd_gen, "generate a random network A(n,d,l)", network=False)
    p.add_argument("--model", required=True, help="e.g. 'A(5,0.5,3)'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default="random")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="qstr: %(message)s")
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", MissingProbabilityWarning)
            payload, code = args.func(args)
        for w in caught:
            log.warning("%s", w.message)
    except (UsageError, QstrError, OSError) as exc:
        print(f"qstr: {exc}", file=sys.stderr)
        return 1 if isinstance(exc, (NoScenarioError, ContradictionError)) else 2
    if args.json:
        out = json.dumps(payload, indent=2) + "\n"
    else:
        out = render_text(payload)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return code
