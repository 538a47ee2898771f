"""Blocked-clause elimination for first-order clause sets, with and without equality."""

from .bce import AUTO, BlockReport, Elimination, build_index, eliminate, eliminate_pure, pure_predicates
from .blocked import APPROX, EQ, EXACT, NOEQ, is_blocked, partner_check
from .core import Clause, Formula, Literal, Substitution, Var, const, eq, fun, lit, neg, neq
from .oracle import Redundancy, check_redundancy
from .resolve import flat_l_resolvent, flatten, is_valid_eq, is_valid_noeq, l_resolvent
from .tptp import ParseError, parse_clause, parse_file, parse_problem, print_problem
from .unify import mgu, try_mgu

__all__ = [
    "APPROX", "AUTO", "EQ", "EXACT", "NOEQ",
    "BlockReport", "Clause", "Elimination", "Formula", "Literal", "ParseError",
    "Redundancy", "Substitution", "Var",
    "build_index", "check_redundancy", "const", "eliminate", "eliminate_pure",
    "eq", "flat_l_resolvent", "flatten", "fun", "is_blocked", "is_valid_eq",
    "is_valid_noeq", "l_resolvent", "lit", "mgu", "neg", "neq", "parse_clause",
    "parse_file", "parse_problem", "partner_check", "print_problem",
    "pure_predicates", "try_mgu",
]
