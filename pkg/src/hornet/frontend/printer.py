"""Render a `Specification` back into the input language.

The output parses to a specification equal to the input up to the renaming
of clause variables, so it doubles as a normal form for test fixtures.
"""

from __future__ import annotations

from hornet.frontend.spec import Correspondence, ProtocolClause, Query, Secrecy, Specification
from hornet.logic.clauses import Assertion, AssertionKind, PredicateKind, display_names
from hornet.logic.terms import Symbol, SymbolKind, Var

_ASSERTION_KEYWORDS = {
    AssertionKind.AXIOM: "axiom",
    AssertionKind.RESTRICTION: "restriction",
    AssertionKind.LEMMA: "lemma",
    AssertionKind.INDUCTIVE_LEMMA: "lemma inductive",
}


def _symbol_line(symbol: Symbol) -> str:
    match symbol.kind:
        case SymbolKind.CONSTRUCTOR:
            return f"fun {symbol.ident}/{symbol.arity}."
        case SymbolKind.DATA:
            return f"data {symbol.ident}/{symbol.arity}."
        case SymbolKind.NAME:
            return f"name {symbol.ident} private." if symbol.private else f"name {symbol.ident}."
        case SymbolKind.DESTRUCTOR:
            return ""


def format_protocol_clause(protocol_clause: ProtocolClause) -> str:
    clause = protocol_clause.clause
    names = display_names(clause)
    shown = clause.rename({var: Var(name, var.uid) for var, name in names.items()})
    parts = [
        f"{fact} [precise]" if index in protocol_clause.precise else str(fact)
        for index, fact in enumerate(shown.hypotheses)
    ]
    parts.extend(str(constraint) for constraint in shown.constraints)
    body = " && ".join(parts) if parts else "true"
    return f"clause {body} => {shown.conclusion}."


def format_assertion(assertion: Assertion) -> str:
    return f"{_ASSERTION_KEYWORDS[assertion.kind]} {assertion}."


def format_query(query: Query) -> str:
    match query:
        case Secrecy():
            return f"query {query.goal}."
        case Correspondence():
            return f"query {query}."


def format_spec(spec: Specification) -> str:
    lines: list[str] = []
    for symbol in spec.symbols:
        if symbol.kind is SymbolKind.DESTRUCTOR:
            lines.extend(f"reduc {rule}." for rule in spec.rewrite_rules if rule.destructor.ident == symbol.ident)
        else:
            lines.append(_symbol_line(symbol))
    for predicate in spec.predicates:
        suffix = " blocking" if predicate.kind is PredicateKind.BLOCKING else ""
        lines.append(f"pred {predicate.ident}/{predicate.arity}{suffix}.")
    lines.extend(format_protocol_clause(protocol_clause) for protocol_clause in spec.protocol_clauses)
    lines.extend(format_assertion(assertion) for assertion in spec.assertions)
    lines.extend(format_query(query) for query in spec.queries)
    return "\n".join(lines) + "\n"
