"""Qualitative spatio-temporal constraint reasoning with a probabilistic layer."""

__version__ = "0.1.0"

from .algebra import (Calculus, Relation, complement, compose, converse, intersect,  # noqa: E402
                      is_atomic, union, universal)
from .calculi import builtin, load_calculus, validate_calculus  # noqa: E402
from .network import QCN, new_qcn, refine, set_constraint, to_dot  # noqa: E402
from .solver import ClosureResult, a_closure, enumerate_scenarios, solve  # noqa: E402
from .probabilistic import (ProbabilisticQCN, RobustnessReport,  # noqa: E402
                            edge_probabilities_from_scenarios, max_robust_scenario, rectify,
                            robustness)
from .io import parse_network, write_network  # noqa: E402
from .export import to_asp_facts, to_neurasp_atoms  # noqa: E402

__all__ = [
    "Calculus", "ClosureResult", "ProbabilisticQCN", "QCN", "Relation", "RobustnessReport",
    "a_closure", "builtin", "complement", "compose", "converse", "edge_probabilities_from_scenarios",
    "enumerate_scenarios", "intersect", "is_atomic", "load_calculus", "max_robust_scenario",
    "new_qcn", "parse_network", "rectify", "refine", "robustness", "set_constraint", "solve",
    "to_asp_facts", "to_dot", "to_neurasp_atoms", "union", "universal", "validate_calculus",
    "write_network",
]
