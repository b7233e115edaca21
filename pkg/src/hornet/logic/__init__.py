"""Term algebra, clauses and constraints shared by every other hornet layer."""

from hornet.logic.clauses import (
    ATT,
    Assertion,
    AssertionKind,
    Clause,
    DataRule,
    Equality,
    Fact,
    Predicate,
    PredicateKind,
    Provenance,
    ProvenanceKind,
    att,
    decompose_data,
    dedupe,
    is_tautology,
    subsumes,
)
from hornet.logic.constraints import (
    UNSAT,
    Constraint,
    ConstraintSet,
    Diseq,
    Geq,
    IsNat,
    NotNat,
    simplify,
    simplify_diseqs,
    simplify_nat,
)
from hornet.logic.terms import (
    App,
    Nat,
    RewriteRule,
    Substitution,
    Symbol,
    SymbolKind,
    Term,
    Var,
    apply,
    match,
    unify,
)

__all__ = [
    "ATT",
    "UNSAT",
    "App",
    "Assertion",
    "AssertionKind",
    "Clause",
    "Constraint",
    "ConstraintSet",
    "DataRule",
    "Diseq",
    "Equality",
    "Fact",
    "Geq",
    "IsNat",
    "Nat",
    "NotNat",
    "Predicate",
    "PredicateKind",
    "Provenance",
    "ProvenanceKind",
    "RewriteRule",
    "Substitution",
    "Symbol",
    "SymbolKind",
    "Term",
    "Var",
    "apply",
    "att",
    "decompose_data",
    "dedupe",
    "is_tautology",
    "match",
    "simplify",
    "simplify_diseqs",
    "simplify_nat",
    "subsumes",
    "unify",
]
