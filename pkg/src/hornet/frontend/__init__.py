"""Input language: parsing, printing and initial clause generation."""

from hornet.frontend.generate import (
    InitialClauses,
    data_rules,
    desugar_precise,
    generate_adversary_clauses,
    initial_clauses,
)
from hornet.frontend.parser import parse_spec
from hornet.frontend.printer import format_spec
from hornet.frontend.spec import Correspondence, ProtocolClause, Query, Secrecy, Specification

__all__ = [
    "Correspondence",
    "InitialClauses",
    "ProtocolClause",
    "Query",
    "Secrecy",
    "Specification",
    "data_rules",
    "desugar_precise",
    "format_spec",
    "generate_adversary_clauses",
    "initial_clauses",
    "parse_spec",
]
