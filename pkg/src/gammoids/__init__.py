"""Linkages, exact sets and gammoids on finite truncations of infinite digraphs."""

from gammoids.errors import BudgetExceeded, GammoidError, GraphFormatError, LinkabilityError, NotExactError
from gammoids.graph import MODES, Digraph, Edge, LinkageProblem, format_graph, parse_graph
from gammoids.families import GraphPresentation, generate_family, truncate
from gammoids.menger import Linkage, Path, Separator, is_linkable, max_linkage
from gammoids.exact import ExactSet, find_exact_set, forwarder, hull, is_exact
from gammoids.constructor import ChainState, ClassifiedPath, build_chain, reroute, stabilized_paths
from gammoids.matroid import AxiomReport, SetSystem, check_axioms, circuits, finitarize, gammoid
from gammoids.ac import AcEmbedding, find_ac_prefix

__all__ = [
    "MODES",
    "AcEmbedding",
    "AxiomReport",
    "BudgetExceeded",
    "ChainState",
    "ClassifiedPath",
    "ExactSet",
    "LinkabilityError",
    "NotExactError",
    "SetSystem",
    "build_chain",
    "check_axioms",
    "circuits",
    "find_ac_prefix",
    "find_exact_set",
    "finitarize",
    "forwarder",
    "gammoid",
    "hull",
    "is_exact",
    "reroute",
    "stabilized_paths",
    "Digraph",
    "Edge",
    "GammoidError",
    "GraphFormatError",
    "GraphPresentation",
    "Linkage",
    "LinkageProblem",
    "Path",
    "Separator",
    "format_graph",
    "generate_family",
    "is_linkable",
    "max_linkage",
    "parse_graph",
    "truncate",
]
