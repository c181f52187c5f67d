"""Prober for a candidate positive 1-in-3-SAT decision procedure.

Encodes each variable of a positive 3CNF formula as a base-4 occurrence
integer, arranges all assignment values as an implicit 2^k1 x 2^k2 matrix,
and runs a recursive three-quadrant search for the all-ones target -- then
measures that procedure differentially against brute-force oracles.
"""

from .encoding import CellIndex, EncodedFormula, Rect, encode_formula
from .formula import Assignment, ParseError, PosCnf, parse_pos3cnf, serialize, validate
from .preprocess import ExpansionResult, expand, preprocess
from .search import SearchConfig, SearchResult, SearchStats, solve, two_dib_search

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "CellIndex",
    "EncodedFormula",
    "ExpansionResult",
    "ParseError",
    "PosCnf",
    "Rect",
    "SearchConfig",
    "SearchResult",
    "SearchStats",
    "encode_formula",
    "expand",
    "parse_pos3cnf",
    "preprocess",
    "serialize",
    "solve",
    "two_dib_search",
    "validate",
]
