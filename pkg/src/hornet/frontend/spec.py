"""The validated form of a protocol specification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import override

from hornet.logic.clauses import Assertion, Clause, Equality, Fact, Predicate
from hornet.logic.terms import RewriteRule, Symbol, SymbolKind


@dataclass(frozen=True, slots=True)
class ProtocolClause:
    """A user clause plus the hypothesis positions tagged `[precise]`."""

    clause: Clause
    precise: tuple[int, ...] = ()
    line: int = 0


@dataclass(frozen=True, slots=True)
class Secrecy:
    goal: Fact

    @override
    def __str__(self) -> str:
        return str(self.goal)


@dataclass(frozen=True, slots=True)
class Correspondence:
    premise: Fact
    required: tuple[Fact | Equality, ...]

    @override
    def __str__(self) -> str:
        return f"{self.premise} ==> {' && '.join(str(part) for part in self.required)}"


type Query = Secrecy | Correspondence


@dataclass(frozen=True)
class Specification:
    symbols: tuple[Symbol, ...] = ()
    rewrite_rules: tuple[RewriteRule, ...] = ()
    predicates: tuple[Predicate, ...] = ()
    protocol_clauses: tuple[ProtocolClause, ...] = ()
    assertions: tuple[Assertion, ...] = ()
    queries: tuple[Query, ...] = ()
    source: str | None = field(default=None, compare=False)

    def symbol(self, ident: str) -> Symbol | None:
        return next((symbol for symbol in self.symbols if symbol.ident == ident), None)

    def predicate(self, ident: str) -> Predicate | None:
        return next((predicate for predicate in self.predicates if predicate.ident == ident), None)

    def of_kind(self, kind: SymbolKind) -> list[Symbol]:
        return [symbol for symbol in self.symbols if symbol.kind is kind]

    @property
    def public_names(self) -> list[Symbol]:
        return [symbol for symbol in self.of_kind(SymbolKind.NAME) if not symbol.private]
