"""Build the initial clause set from a validated specification.

Adversary clauses come first (constructors, rewrite rules, data
constructors with their projections, public names), followed by the
protocol clauses after `[precise]` annotations have been desugared. Every
initial clause carries the identity justification pointing at its own index.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Final

from hornet.core.logging import get_logger
from hornet.frontend.spec import ProtocolClause, Specification
from hornet.logic import justification
from hornet.logic.clauses import (
    Assertion,
    AssertionKind,
    Clause,
    DataRule,
    Equality,
    Fact,
    Predicate,
    PredicateKind,
    att,
)
from hornet.logic.terms import App, Symbol, SymbolKind, Var, fresh_var, name

logger = get_logger(__name__)

PRECISE_PREDICATE: Final = "Precise"
PRECISE_AXIOM: Final = "precise"
OCC_PREFIX: Final = "occ"


def _arguments(count: int) -> tuple[Var, ...]:
    return tuple(fresh_var(f"x{index}") for index in range(1, count + 1))


def _constructor_clause(symbol: Symbol) -> Clause:
    args = _arguments(symbol.arity)
    return Clause(tuple(att(arg) for arg in args), att(App(symbol, args)), label=f"constructor {symbol.ident}")


def _data_clauses(symbol: Symbol) -> list[Clause]:
    # generator and projections share their variables; DataRule relies on it
    args = _arguments(symbol.arity)
    packed = att(App(symbol, args))
    clauses = [Clause(tuple(att(arg) for arg in args), packed, exempt=True, label=f"data {symbol.ident}")]
    clauses.extend(
        Clause((packed,), att(arg), exempt=True, label=f"projection {position} of {symbol.ident}")
        for position, arg in enumerate(args, start=1)
    )
    return clauses


def generate_adversary_clauses(spec: Specification) -> list[Clause]:
    """Clauses describing what the adversary can compute.

    One clause per constructor, one per rewrite rule, a generator plus one
    projection per argument for each data constructor, and a fact per public name.
    """
    clauses: list[Clause] = [_constructor_clause(symbol) for symbol in spec.of_kind(SymbolKind.CONSTRUCTOR)]
    clauses.extend(
        Clause(
            tuple(att(arg) for arg in rule.lhs_args),
            att(rule.rhs),
            label=f"rewrite {rule.destructor.ident}",
        )
        for rule in spec.rewrite_rules
    )
    for symbol in spec.of_kind(SymbolKind.DATA):
        clauses.extend(_data_clauses(symbol))
    clauses.extend(Clause((), att(name(symbol)), label=f"name {symbol.ident}") for symbol in spec.public_names)
    return clauses


def data_rules(clauses: list[Clause]) -> dict[str, DataRule]:
    """Locate the generator and projection clauses of every data constructor in `clauses`."""
    generators: dict[str, tuple[int, tuple[Var, ...]]] = {}
    projections: dict[str, dict[Var, int]] = {}
    for index, clause in enumerate(clauses):
        if not clause.exempt:
            continue
        if not any(isinstance(fact.args[0], App) for fact in clause.hypotheses):
            packed = clause.conclusion.args[0]
            if isinstance(packed, App) and all(isinstance(arg, Var) for arg in packed.args):
                generators[packed.symbol.ident] = (index, tuple(arg for arg in packed.args if isinstance(arg, Var)))
            continue
        packed = clause.hypotheses[0].args[0]
        component = clause.conclusion.args[0]
        if isinstance(packed, App) and isinstance(component, Var):
            projections.setdefault(packed.symbol.ident, {})[component] = index
    rules: dict[str, DataRule] = {}
    for ident, (generator, variables) in generators.items():
        by_var = projections.get(ident, {})
        if all(var in by_var for var in variables):
            rules[ident] = DataRule(generator, tuple(by_var[var] for var in variables), variables)
    return rules


def _unused(base: str, taken: set[str]) -> str:
    candidate, counter = base, 0
    while candidate in taken:
        counter += 1
        candidate = f"{base}_{counter}"
    taken.add(candidate)
    return candidate


def _precise_predicate(spec: Specification, taken: set[str]) -> tuple[Predicate, bool]:
    existing = spec.predicate(PRECISE_PREDICATE)
    if existing is not None and existing.arity == 2 and existing.kind is PredicateKind.BLOCKING:
        return existing, False
    return Predicate(_unused(PRECISE_PREDICATE, taken), 2, PredicateKind.BLOCKING), True


def precise_axiom(predicate: Predicate) -> Assertion:
    """`event(Precise(o,x1)) && event(Precise(o,x2)) ==> x1 = x2`"""
    occ, first, second = fresh_var("o"), fresh_var("x1"), fresh_var("x2")
    return Assertion(
        PRECISE_AXIOM,
        AssertionKind.AXIOM,
        (Fact(predicate, (occ, first)), Fact(predicate, (occ, second))),
        (Equality(first, second),),
    )


def desugar_precise(spec: Specification) -> Specification:
    """Replace `[precise]` tags by Precise events on fresh private names.

    Each annotated hypothesis `att(M)` gets its own name `occ_i` and the
    clause gains `event(Precise(occ_i, M))` in front of its hypotheses. The
    Precise axiom is registered once. Specs without tags come back unchanged.
    """
    if not any(protocol_clause.precise for protocol_clause in spec.protocol_clauses):
        return spec
    taken = {symbol.ident for symbol in spec.symbols} | {predicate.ident for predicate in spec.predicates}
    taken.add("att")
    predicate, declared = _precise_predicate(spec, taken)
    occurrences: list[Symbol] = []
    rewritten: list[ProtocolClause] = []
    for protocol_clause in spec.protocol_clauses:
        if not protocol_clause.precise:
            rewritten.append(protocol_clause)
            continue
        clause = protocol_clause.clause
        events: list[Fact] = []
        for position in protocol_clause.precise:
            occ = Symbol(_unused(f"{OCC_PREFIX}{len(occurrences) + 1}", taken), 0, SymbolKind.NAME, private=True)
            occurrences.append(occ)
            events.append(Fact(predicate, (name(occ), clause.hypotheses[position].args[0])))
        clause = replace(clause, hypotheses=(*events, *clause.hypotheses))
        rewritten.append(replace(protocol_clause, clause=clause, precise=()))
    assertions = spec.assertions
    if not any(assertion.ident == PRECISE_AXIOM for assertion in assertions):
        assertions = (*assertions, precise_axiom(predicate))
    logger.debug("Desugared precise annotations", sites=len(occurrences), predicate=predicate.ident)
    return replace(
        spec,
        symbols=(*spec.symbols, *occurrences),
        predicates=(*spec.predicates, predicate) if declared else spec.predicates,
        protocol_clauses=tuple(rewritten),
        assertions=assertions,
    )


@dataclass(frozen=True)
class InitialClauses:
    """The numbered initial clauses plus where each data constructor's clauses live."""

    clauses: tuple[Clause, ...]
    rules: dict[str, DataRule]
    adversary_count: int

    def __len__(self) -> int:
        return len(self.clauses)

    def __getitem__(self, index: int) -> Clause:
        return self.clauses[index]


def initial_clauses(spec: Specification) -> InitialClauses:
    """Number the adversary and protocol clauses of an already desugared spec."""
    adversary = generate_adversary_clauses(spec)
    protocol = [protocol_clause.clause for protocol_clause in spec.protocol_clauses]
    numbered = tuple(
        replace(clause, template=justification.initial(index, clause.variables(), len(clause.hypotheses)))
        for index, clause in enumerate([*adversary, *protocol])
    )
    logger.debug("Generated initial clauses", adversary=len(adversary), protocol=len(protocol))
    return InitialClauses(numbered, data_rules(list(numbered)), len(adversary))
