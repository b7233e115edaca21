"""Parse specification text into a validated `Specification`.

Parsing runs in two stages. Lark turns the text into plain syntax records
that keep their source positions; `_Resolver` then resolves identifiers
against the declarations, scopes variables per statement and collects every
problem as a `Diagnostic` before raising a single `SpecificationError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from typing import Final

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError
from lark.tree import Meta

from hornet.core.errors import Diagnostic, DiagnosticKind, SpecificationError
from hornet.core.logging import get_logger
from hornet.frontend.spec import Correspondence, ProtocolClause, Query, Secrecy, Specification
from hornet.logic.clauses import (
    ATT,
    Assertion,
    AssertionKind,
    Clause,
    Equality,
    Fact,
    Predicate,
    PredicateKind,
)
from hornet.logic.constraints import Constraint, ConstraintSet, Diseq, Geq, IsNat, NotNat
from hornet.logic.terms import App, Nat, RewriteRule, Symbol, SymbolKind, Term, Var, fresh_var, variables_of

logger = get_logger(__name__)

DEFAULT_PUBLIC_NAME: Final = "b0"


@dataclass(frozen=True, slots=True)
class _Pos:
    line: int
    column: int


@dataclass(frozen=True, slots=True)
class _Term:
    pos: _Pos
    ident: str | None = None
    args: tuple[_Term, ...] | None = None
    nat: int | None = None


@dataclass(frozen=True, slots=True)
class _Fact:
    pos: _Pos
    ident: str
    args: tuple[_Term, ...]
    sugared: bool = False


@dataclass(frozen=True, slots=True)
class _Hyp:
    fact: _Fact
    precise: bool


@dataclass(frozen=True, slots=True)
class _Diseq:
    pos: _Pos
    universals: tuple[str, ...]
    lhs: _Term
    rhs: _Term


@dataclass(frozen=True, slots=True)
class _NatTest:
    pos: _Pos
    term: _Term
    negated: bool


@dataclass(frozen=True, slots=True)
class _Geq:
    pos: _Pos
    lhs: _Term
    rhs: _Term
    offset: int


@dataclass(frozen=True, slots=True)
class _Equality:
    pos: _Pos
    lhs: _Term
    rhs: _Term


type _Constraint = _Diseq | _NatTest | _Geq


@dataclass(frozen=True, slots=True)
class _SymbolDecl:
    pos: _Pos
    ident: str
    arity: int
    kind: SymbolKind
    private: bool = False


@dataclass(frozen=True, slots=True)
class _PredDecl:
    pos: _Pos
    ident: str
    arity: int
    blocking: bool


@dataclass(frozen=True, slots=True)
class _ReducDecl:
    pos: _Pos
    lhs: _Term
    rhs: _Term


@dataclass(frozen=True, slots=True)
class _ClauseDecl:
    pos: _Pos
    hyps: tuple[_Hyp | _Constraint, ...]
    conclusion: _Fact


@dataclass(frozen=True, slots=True)
class _AssertionDecl:
    pos: _Pos
    kind: AssertionKind
    premises: tuple[_Fact, ...]
    conclusion: tuple[_Fact | _Equality, ...]


@dataclass(frozen=True, slots=True)
class _QueryDecl:
    pos: _Pos
    premise: _Fact
    required: tuple[_Fact, ...] | None


type _Statement = _SymbolDecl | _PredDecl | _ReducDecl | _ClauseDecl | _AssertionDecl | _QueryDecl


def _pos(meta: Meta) -> _Pos:
    return _Pos(getattr(meta, "line", 0), getattr(meta, "column", 0))


def _tok_pos(token: Token) -> _Pos:
    return _Pos(token.line or 0, token.column or 0)


@v_args(meta=True, inline=True)
class _ToSyntax(Transformer[Token, list[_Statement]]):
    """Lark tree to positioned syntax records; no name resolution here."""

    def start(self, meta: Meta, *statements: _Statement) -> list[_Statement]:
        return list(statements)

    def fun_decl(self, meta: Meta, ident: Token, arity: Token) -> _SymbolDecl:
        return _SymbolDecl(_pos(meta), str(ident), int(arity), SymbolKind.CONSTRUCTOR)

    def data_decl(self, meta: Meta, ident: Token, arity: Token) -> _SymbolDecl:
        return _SymbolDecl(_pos(meta), str(ident), int(arity), SymbolKind.DATA)

    def name_decl(self, meta: Meta, ident: Token, private: object) -> _SymbolDecl:
        return _SymbolDecl(_pos(meta), str(ident), 0, SymbolKind.NAME, private=private is not None)

    def pred_decl(self, meta: Meta, ident: Token, arity: Token, blocking: object) -> _PredDecl:
        return _PredDecl(_pos(meta), str(ident), int(arity), blocking is not None)

    def private(self, meta: Meta) -> bool:
        return True

    def blocking(self, meta: Meta) -> bool:
        return True

    def reduc_decl(self, meta: Meta, lhs: _Term, rhs: _Term) -> _ReducDecl:
        return _ReducDecl(_pos(meta), lhs, rhs)

    def clause_decl(self, meta: Meta, hyps: tuple[_Hyp | _Constraint, ...], conclusion: _Fact) -> _ClauseDecl:
        return _ClauseDecl(_pos(meta), hyps, conclusion)

    def assertion_decl(
        self, meta: Meta, kind: AssertionKind, premises: tuple[_Fact, ...], conclusion: tuple[_Fact | _Equality, ...]
    ) -> _AssertionDecl:
        return _AssertionDecl(_pos(meta), kind, premises, conclusion)

    def query_decl(self, meta: Meta, premise: _Fact, required: tuple[_Fact, ...] | None) -> _QueryDecl:
        return _QueryDecl(_pos(meta), premise, required)

    def axiom(self, meta: Meta) -> AssertionKind:
        return AssertionKind.AXIOM

    def restriction(self, meta: Meta) -> AssertionKind:
        return AssertionKind.RESTRICTION

    def lemma(self, meta: Meta) -> AssertionKind:
        return AssertionKind.LEMMA

    def inductive_lemma(self, meta: Meta) -> AssertionKind:
        return AssertionKind.INDUCTIVE_LEMMA

    def no_hyps(self, meta: Meta) -> tuple[_Hyp | _Constraint, ...]:
        return ()

    def hyps(self, meta: Meta, *items: _Hyp | _Constraint) -> tuple[_Hyp | _Constraint, ...]:
        return items

    def fact_hyp(self, meta: Meta, fact: _Fact, precise: Token | None) -> _Hyp:
        return _Hyp(fact, precise is not None)

    def diseq(self, meta: Meta, universals: tuple[str, ...] | None, lhs: _Term, rhs: _Term) -> _Diseq:
        return _Diseq(_pos(meta), universals or (), lhs, rhs)

    def forall(self, meta: Meta, *idents: Token) -> tuple[str, ...]:
        return tuple(str(ident) for ident in idents)

    def is_nat(self, meta: Meta, term: _Term) -> _NatTest:
        return _NatTest(_pos(meta), term, negated=False)

    def not_nat(self, meta: Meta, term: _Term) -> _NatTest:
        return _NatTest(_pos(meta), term, negated=True)

    def geq(self, meta: Meta, lhs: _Term, rhs: _Term, offset: int | None) -> _Geq:
        return _Geq(_pos(meta), lhs, rhs, offset or 0)

    def plus(self, meta: Meta, value: Token) -> int:
        return int(value)

    def minus(self, meta: Meta, value: Token) -> int:
        return -int(value)

    def facts(self, meta: Meta, *facts: _Fact) -> tuple[_Fact, ...]:
        return facts

    def conclusion(self, meta: Meta, *items: _Fact | _Equality) -> tuple[_Fact | _Equality, ...]:
        return items

    def equality(self, meta: Meta, lhs: _Term, rhs: _Term) -> _Equality:
        return _Equality(_pos(meta), lhs, rhs)

    def plain_fact(self, meta: Meta, ident: Token, args: tuple[_Term, ...] | None) -> _Fact:
        return _Fact(_pos(meta), str(ident), args or ())

    def event_fact(self, meta: Meta, ident: Token, args: tuple[_Term, ...] | None) -> _Fact:
        return _Fact(_pos(meta), str(ident), args or (), sugared=True)

    def app(self, meta: Meta, ident: Token, args: tuple[_Term, ...]) -> _Term:
        return _Term(_pos(meta), str(ident), args)

    def atom(self, meta: Meta, ident: Token) -> _Term:
        return _Term(_tok_pos(ident), str(ident))

    def nat(self, meta: Meta, value: Token) -> _Term:
        return _Term(_tok_pos(value), nat=int(value))

    def args(self, meta: Meta, *terms: _Term) -> tuple[_Term, ...]:
        return terms


@cache
def _grammar() -> Lark:
    return Lark.open(
        "grammar.lark",
        rel_to=__file__,
        parser="earley",
        lexer="basic",
        propagate_positions=True,
        maybe_placeholders=True,
    )


class _Resolver:
    """Resolve syntax records against declarations, collecting diagnostics."""

    def __init__(self) -> None:
        self.diagnostics: list[Diagnostic] = []
        self.symbols: dict[str, Symbol] = {}
        self.predicates: dict[str, Predicate] = {ATT.ident: ATT}
        self.rewrite_rules: list[RewriteRule] = []
        self.protocol_clauses: list[ProtocolClause] = []
        self.assertions: list[Assertion] = []
        self.queries: list[Query] = []

    def error(self, pos: _Pos, kind: DiagnosticKind, message: str) -> None:
        self.diagnostics.append(Diagnostic(pos.line, pos.column, message, kind))

    def _declare(self, pos: _Pos, ident: str) -> bool:
        if ident in self.symbols or ident in self.predicates:
            self.error(pos, DiagnosticKind.DUPLICATE_SYMBOL, f"'{ident}' is already declared")
            return False
        return True

    def declare(self, statements: list[_Statement]) -> None:
        for statement in statements:
            match statement:
                case _SymbolDecl(pos=pos, ident=ident):
                    if self._declare(pos, ident):
                        self.symbols[ident] = Symbol(ident, statement.arity, statement.kind, statement.private)
                case _PredDecl(pos=pos, ident=ident, arity=arity, blocking=blocking):
                    if self._declare(pos, ident):
                        kind = PredicateKind.BLOCKING if blocking else PredicateKind.EVENT
                        self.predicates[ident] = Predicate(ident, arity, kind)
                case _ReducDecl(pos=pos, lhs=lhs):
                    self._declare_destructor(pos, lhs)
                case _:
                    pass

    def _declare_destructor(self, pos: _Pos, lhs: _Term) -> None:
        if lhs.ident is None or lhs.args is None:
            self.error(pos, DiagnosticKind.INVALID_RULE, "the left-hand side of a rewrite rule must apply a destructor")
            return
        existing = self.symbols.get(lhs.ident)
        if existing is None:
            if self._declare(pos, lhs.ident):
                self.symbols[lhs.ident] = Symbol(lhs.ident, len(lhs.args), SymbolKind.DESTRUCTOR)
        elif existing.kind is not SymbolKind.DESTRUCTOR:
            self.error(pos, DiagnosticKind.INVALID_RULE, f"'{lhs.ident}' is a {existing.kind}, not a destructor")
        elif existing.arity != len(lhs.args):
            self.error(
                pos, DiagnosticKind.ARITY, f"destructor '{lhs.ident}' has arity {existing.arity}, got {len(lhs.args)}"
            )

    def term(self, raw: _Term, scope: dict[str, Var], *, allow_destructor: bool = False) -> Term:
        if raw.nat is not None:
            return Nat(raw.nat)
        ident = raw.ident or ""
        symbol = self.symbols.get(ident)
        if raw.args is None:
            if symbol is None:
                if raw.ident in self.predicates:
                    self.error(raw.pos, DiagnosticKind.UNKNOWN_SYMBOL, f"predicate '{raw.ident}' used as a term")
                return scope.setdefault(raw.ident, fresh_var(raw.ident))
            if symbol.arity != 0:
                self.error(raw.pos, DiagnosticKind.ARITY, f"'{raw.ident}' expects {symbol.arity} arguments, got 0")
                return fresh_var(raw.ident)
            return App(symbol, ())
        if symbol is None:
            self.error(raw.pos, DiagnosticKind.UNKNOWN_SYMBOL, f"unknown function symbol '{raw.ident}'")
            return fresh_var(raw.ident)
        if symbol.kind is SymbolKind.DESTRUCTOR and not allow_destructor:
            self.error(
                raw.pos,
                DiagnosticKind.DESTRUCTOR_IN_CLAUSE,
                f"destructor '{raw.ident}' may only appear at the root of a rewrite rule",
            )
            return fresh_var(raw.ident)
        if symbol.arity != len(raw.args):
            self.error(
                raw.pos, DiagnosticKind.ARITY, f"'{raw.ident}' expects {symbol.arity} arguments, got {len(raw.args)}"
            )
            return fresh_var(raw.ident)
        return App(symbol, tuple(self.term(arg, scope) for arg in raw.args))

    def fact(self, raw: _Fact, scope: dict[str, Var]) -> Fact | None:
        predicate = self.predicates.get(raw.ident)
        if predicate is None:
            self.error(raw.pos, DiagnosticKind.UNKNOWN_SYMBOL, f"unknown predicate '{raw.ident}'")
            return None
        if raw.sugared and predicate is ATT:
            self.error(raw.pos, DiagnosticKind.SYNTAX, "att facts cannot be written as events")
            return None
        if predicate.arity != len(raw.args):
            self.error(
                raw.pos,
                DiagnosticKind.ARITY,
                f"predicate '{raw.ident}' expects {predicate.arity} arguments, got {len(raw.args)}",
            )
            return None
        return Fact(predicate, tuple(self.term(arg, scope) for arg in raw.args))

    def constraint(self, raw: _Constraint, scope: dict[str, Var]) -> Constraint:
        match raw:
            case _Diseq(universals=universals, lhs=lhs, rhs=rhs):
                bound = {ident: fresh_var(ident) for ident in universals}
                inner = {**scope, **bound}
                diseq = Diseq(frozenset(bound.values()), self.term(lhs, inner), self.term(rhs, inner))
                # variables first seen inside the disequation still belong to the clause
                for ident, var in inner.items():
                    if ident not in bound:
                        scope.setdefault(ident, var)
                return diseq
            case _NatTest(term=term, negated=negated):
                resolved = self.term(term, scope)
                return NotNat(resolved) if negated else IsNat(resolved)
            case _Geq(lhs=lhs, rhs=rhs, offset=offset):
                return Geq(self.term(lhs, scope), self.term(rhs, scope), offset)

    def rewrite_rule(self, statement: _ReducDecl) -> None:
        lhs = statement.lhs
        if lhs.ident is None or lhs.args is None:
            return
        destructor = self.symbols.get(lhs.ident)
        if destructor is None or destructor.kind is not SymbolKind.DESTRUCTOR:
            return
        scope: dict[str, Var] = {}
        lhs_args = tuple(self.term(arg, scope) for arg in lhs.args)
        known = set(variables_of(lhs_args))
        rhs = self.term(statement.rhs, scope)
        if not set(variables_of([rhs])) <= known:
            self.error(
                statement.pos,
                DiagnosticKind.INVALID_RULE,
                "variables of the right-hand side must occur on the left-hand side",
            )
            return
        self.rewrite_rules.append(RewriteRule(destructor, lhs_args, rhs))

    def protocol_clause(self, statement: _ClauseDecl) -> None:
        scope: dict[str, Var] = {}
        hypotheses: list[Fact] = []
        constraints: list[Constraint] = []
        precise: list[int] = []
        for item in statement.hyps:
            if isinstance(item, _Hyp):
                fact = self.fact(item.fact, scope)
                if fact is None:
                    continue
                if item.precise:
                    if not fact.is_attacker:
                        self.error(item.fact.pos, DiagnosticKind.INVALID_RULE, "[precise] applies to att hypotheses only")
                    precise.append(len(hypotheses))
                hypotheses.append(fact)
            else:
                constraints.append(self.constraint(item, scope))
        conclusion = self.fact(statement.conclusion, scope)
        if conclusion is None:
            return
        if conclusion.is_blocking:
            self.error(
                statement.conclusion.pos,
                DiagnosticKind.BLOCKING_CONCLUSION,
                f"blocking predicate '{conclusion.predicate.ident}' cannot be a clause conclusion",
            )
            return
        clause = Clause(
            tuple(hypotheses),
            conclusion,
            ConstraintSet.of(constraints),
            label=f"clause at line {statement.pos.line}",
        )
        self.protocol_clauses.append(ProtocolClause(clause, tuple(precise), statement.pos.line))

    def assertion(self, statement: _AssertionDecl) -> None:
        scope: dict[str, Var] = {}
        premises: list[Fact] = []
        for raw in statement.premises:
            fact = self.fact(raw, scope)
            if fact is None:
                continue
            if fact.predicate.kind is PredicateKind.EVENT:
                self.error(
                    raw.pos,
                    DiagnosticKind.INVALID_ASSERTION,
                    f"assertion premises must be att or blocking facts, not '{fact.predicate.ident}'",
                )
            premises.append(fact)
        known = set(scope.values())
        conclusion: list[Fact | Equality] = []
        for item in statement.conclusion:
            resolved: Fact | Equality | None
            if isinstance(item, _Equality):
                resolved = Equality(self.term(item.lhs, scope), self.term(item.rhs, scope))
            else:
                resolved = self.fact(item, scope)
            if resolved is not None:
                conclusion.append(resolved)
        if set(scope.values()) - known:
            self.error(
                statement.pos,
                DiagnosticKind.INVALID_ASSERTION,
                "variables of an assertion conclusion must occur in its premises",
            )
            return
        index = sum(1 for assertion in self.assertions if assertion.kind is statement.kind) + 1
        self.assertions.append(Assertion(f"{statement.kind}{index}", statement.kind, tuple(premises), tuple(conclusion)))

    def query(self, statement: _QueryDecl) -> None:
        scope: dict[str, Var] = {}
        premise = self.fact(statement.premise, scope)
        if premise is None:
            return
        if statement.required is None:
            if not premise.is_attacker:
                self.error(statement.pos, DiagnosticKind.INVALID_QUERY, "a secrecy query must be an att fact")
                return
            self.queries.append(Secrecy(premise))
            return
        if premise.predicate.kind is not PredicateKind.EVENT:
            self.error(
                statement.pos,
                DiagnosticKind.INVALID_QUERY,
                "the premise of a correspondence query must be a non-blocking event",
            )
            return
        required: list[Fact] = []
        for raw in statement.required:
            fact = self.fact(raw, scope)
            if fact is None:
                continue
            if not fact.is_blocking:
                self.error(raw.pos, DiagnosticKind.INVALID_QUERY, "required facts of a correspondence must be blocking")
                continue
            required.append(fact)
        self.queries.append(Correspondence(premise, tuple(required)))

    def build(self, statements: list[_Statement], source: str | None) -> Specification:
        self.declare(statements)
        for statement in statements:
            match statement:
                case _ReducDecl():
                    self.rewrite_rule(statement)
                case _ClauseDecl():
                    self.protocol_clause(statement)
                case _AssertionDecl():
                    self.assertion(statement)
                case _QueryDecl():
                    self.query(statement)
                case _:
                    pass
        symbols = list(self.symbols.values())
        if not any(symbol.kind is SymbolKind.NAME and not symbol.private for symbol in symbols):
            symbols.append(Symbol(_unused_ident(DEFAULT_PUBLIC_NAME, self), 0, SymbolKind.NAME))
        return Specification(
            symbols=tuple(symbols),
            rewrite_rules=tuple(self.rewrite_rules),
            predicates=tuple(predicate for predicate in self.predicates.values() if predicate is not ATT),
            protocol_clauses=tuple(self.protocol_clauses),
            assertions=tuple(self.assertions),
            queries=tuple(self.queries),
            source=source,
        )


def _unused_ident(base: str, resolver: _Resolver) -> str:
    stem = base.rstrip("0123456789")
    candidate, counter = base, 0
    while candidate in resolver.symbols or candidate in resolver.predicates:
        counter += 1
        candidate = f"{stem}{counter}"
    return candidate


def _syntax_diagnostic(exc: UnexpectedInput) -> Diagnostic:
    match exc:
        case UnexpectedEOF():
            message = "unexpected end of input"
        case UnexpectedCharacters():
            message = f"unexpected character {exc.char!r}"
        case _:
            token = getattr(exc, "token", None)
            message = f"unexpected token {str(token)!r}" if token is not None else "syntax error"
    return Diagnostic(getattr(exc, "line", 0) or 0, getattr(exc, "column", 0) or 0, message, DiagnosticKind.SYNTAX)


def parse_spec(text: str, source: str | None = None) -> Specification:
    """Parse and validate a specification.

    Raises:
        SpecificationError: with one diagnostic per problem found.
    """
    try:
        tree = _grammar().parse(text)
        statements = _ToSyntax().transform(tree)
    except UnexpectedInput as exc:
        diagnostic = _syntax_diagnostic(exc)
        logger.warning("Specification failed to parse", source=source, line=diagnostic.line, column=diagnostic.column)
        raise SpecificationError("Specification has a syntax error", [diagnostic], source) from exc
    except VisitError as exc:
        raise SpecificationError(
            "Specification could not be read", [Diagnostic(0, 0, str(exc.orig_exc), DiagnosticKind.SYNTAX)], source
        ) from exc

    resolver = _Resolver()
    spec = resolver.build(statements, source)
    if resolver.diagnostics:
        logger.warning("Specification failed validation", source=source, diagnostics=len(resolver.diagnostics))
        raise SpecificationError("Specification is invalid", resolver.diagnostics, source)
    logger.debug(
        "Specification parsed",
        source=source,
        symbols=len(spec.symbols),
        clauses=len(spec.protocol_clauses),
        queries=len(spec.queries),
    )
    return spec
