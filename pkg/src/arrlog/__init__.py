"""Exact computations on central hyperplane arrangements and their logarithmic derivations."""

from .arrangement import Arrangement, Hyperplane, ParseError, parse_arrangement
from .graphic import Graph, graphic_arrangement, graphic_t, parse_graph
from .lattice import build_lattice, char_poly
from .logder import Derivation, DegreeSequence, InvariantError, degree_sequence, is_free
from .restriction import minimal_restriction

__all__ = [
    "Arrangement", "Hyperplane", "ParseError", "parse_arrangement",
    "Graph", "graphic_arrangement", "graphic_t", "parse_graph",
    "build_lattice", "char_poly",
    "Derivation", "DegreeSequence", "InvariantError", "degree_sequence", "is_free",
    "minimal_restriction",
]
