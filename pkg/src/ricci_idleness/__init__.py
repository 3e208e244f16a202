"""Exact Ollivier-Ricci idleness functions of graph edges."""

from .exactnum import LinearProgram, Constraint, LpSolution, parse_rational, render, solve_lp
from .graphkit import Graph, GraphError, EdgeListParseError, from_edge_list, from_spec, generate
from .idleness import (
    EdgeReport,
    IdlenessFunction,
    edge_report,
    idleness_function,
    kappa_lly,
    kappa_zero,
    oracle_suite,
    product_idleness,
    scan,
)

__all__ = [
    "Constraint",
    "EdgeListParseError",
    "EdgeReport",
    "Graph",
    "GraphError",
    "IdlenessFunction",
    "LinearProgram",
    "LpSolution",
    "edge_report",
    "from_edge_list",
    "from_spec",
    "generate",
    "idleness_function",
    "kappa_lly",
    "kappa_zero",
    "oracle_suite",
    "parse_rational",
    "product_idleness",
    "render",
    "scan",
    "solve_lp",
]
