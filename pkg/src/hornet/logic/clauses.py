"""Facts, Horn clauses and assertions, with the clause-level checks and simplifications."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field, replace
from enum import StrEnum
from typing import Final, override

from hornet.logic import justification
from hornet.logic.constraints import EMPTY_CONSTRAINTS, ConstraintSet, implies
from hornet.logic.justification import Leaf, Step, Template
from hornet.logic.terms import (
    App,
    Substitution,
    SymbolKind,
    Term,
    Var,
    apply,
    canonical_renaming,
    depth as term_depth,
    match_into,
    renaming,
    size,
    unify_pairs,
    variables_of,
)


class PredicateKind(StrEnum):
    ATTACKER = "attacker"
    BLOCKING = "blocking"
    EVENT = "conclusion-event"


@dataclass(frozen=True, slots=True)
class Predicate:
    ident: str
    arity: int
    kind: PredicateKind


ATT: Final = Predicate("att", 1, PredicateKind.ATTACKER)


@dataclass(frozen=True, slots=True, eq=False)
class Fact:
    predicate: Predicate
    args: tuple[Term, ...]
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((self.predicate.ident, self.args)))

    @override
    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Fact) or self._hash != other._hash:
            return False
        return self.predicate.ident == other.predicate.ident and self.args == other.args

    @override
    def __hash__(self) -> int:
        return self._hash

    @property
    def is_attacker(self) -> bool:
        return self.predicate.kind is PredicateKind.ATTACKER

    @property
    def is_blocking(self) -> bool:
        return self.predicate.kind is PredicateKind.BLOCKING

    def apply(self, subst: Mapping[Var, Term]) -> Fact:
        if not subst:
            return self
        return Fact(self.predicate, tuple(apply(subst, arg) for arg in self.args))

    def size(self) -> int:
        return sum(size(arg) for arg in self.args)

    @override
    def __str__(self) -> str:
        ident = self.predicate.ident
        if self.is_blocking:
            return f"event({ident}({','.join(str(arg) for arg in self.args)}))" if self.args else f"event({ident})"
        return f"{ident}({','.join(str(arg) for arg in self.args)})"


def att(term: Term) -> Fact:
    return Fact(ATT, (term,))


def facts_unifier(left: Fact, right: Fact, base: Mapping[Var, Term] | None = None) -> Substitution | None:
    if left.predicate.ident != right.predicate.ident or len(left.args) != len(right.args):
        return None
    return unify_pairs(zip(left.args, right.args, strict=True), base)


def match_fact(pattern: Fact, target: Fact, subst: Substitution) -> Substitution | None:
    """Extend a copy of `subst` so that `pattern` maps onto `target`."""
    if pattern.predicate.ident != target.predicate.ident or len(pattern.args) != len(target.args):
        return None
    extended = dict(subst)
    for p, t in zip(pattern.args, target.args, strict=True):
        if not match_into(p, t, extended):
            return None
    return extended


class ProvenanceKind(StrEnum):
    INITIAL = "initial"
    RESOLVED = "resolved-from"
    STRENGTHENED = "strengthened-by"


@dataclass(frozen=True, slots=True)
class Provenance:
    kind: ProvenanceKind
    parents: tuple[int, ...] = ()
    assertion: str | None = None

    @override
    def __str__(self) -> str:
        match self.kind:
            case ProvenanceKind.INITIAL:
                return "initial"
            case ProvenanceKind.RESOLVED:
                return f"resolved-from({','.join(str(p) for p in self.parents)})"
            case ProvenanceKind.STRENGTHENED:
                return f"strengthened-by({self.assertion})"


INITIAL: Final = Provenance(ProvenanceKind.INITIAL)

# (assertion ident, premise instances) pairs already used on a clause
type Trigger = tuple[str, tuple[Fact, ...]]


@dataclass(frozen=True)
class Clause:
    """`hypotheses && constraints => conclusion`

    Only the logical content takes part in equality; bookkeeping fields
    (provenance, justification, exemption, label, applied triggers) do not.
    """

    hypotheses: tuple[Fact, ...]
    conclusion: Fact
    constraints: ConstraintSet = EMPTY_CONSTRAINTS
    provenance: Provenance = field(default=INITIAL, compare=False)
    template: Template | None = field(default=None, compare=False, repr=False)
    exempt: bool = field(default=False, compare=False)
    label: str = field(default="", compare=False)
    applied: frozenset[Trigger] = field(default=frozenset(), compare=False, repr=False)

    def variables(self) -> dict[Var, None]:
        """Free variables in order of first appearance (hypotheses, conclusion, constraints)."""
        terms = [arg for fact in (*self.hypotheses, self.conclusion) for arg in fact.args]
        return variables_of([*terms, *self.constraints.free_terms()])

    def facts(self) -> Iterator[Fact]:
        yield from self.hypotheses
        yield self.conclusion

    def apply(self, subst: Mapping[Var, Term]) -> Clause:
        if not subst:
            return self
        return replace(
            self,
            hypotheses=tuple(fact.apply(subst) for fact in self.hypotheses),
            conclusion=self.conclusion.apply(subst),
            constraints=self.constraints.apply(subst),
            template=justification.substitute(self.template, subst) if self.template is not None else None,
            applied=_apply_triggers(self.applied, subst),
        )

    def rename(self, mapping: Mapping[Var, Term] | None = None) -> Clause:
        """Rename every variable apart (fresh ids unless `mapping` is given)."""
        if mapping is None:
            mapping = renaming([*self.variables(), *self.constraints.universals()])
        return replace(
            self,
            hypotheses=tuple(fact.apply(mapping) for fact in self.hypotheses),
            conclusion=self.conclusion.apply(mapping),
            constraints=self.constraints.rename(mapping),
            template=justification.substitute(self.template, mapping) if self.template is not None else None,
            applied=_apply_triggers(self.applied, mapping),
        )

    def canonical(self) -> Clause:
        """Deterministically renamed variant; equal for clauses that are equal up to renaming."""
        return self.rename(canonical_renaming([*self.variables(), *self.constraints.universals()]))

    @property
    def depth(self) -> int:
        return max((term_depth(arg) for fact in self.facts() for arg in fact.args), default=0)

    @override
    def __str__(self) -> str:
        return format_clause(self)


def _apply_triggers(triggers: frozenset[Trigger], subst: Mapping[Var, Term]) -> frozenset[Trigger]:
    if not triggers:
        return triggers
    return frozenset((ident, tuple(fact.apply(subst) for fact in facts)) for ident, facts in triggers)


def display_names(clause: Clause) -> dict[Var, str]:
    """Variable names for printing: the source ident, suffixed when two variables share it."""
    ordered = [*clause.variables(), *clause.constraints.universals()]
    counts = Counter(var.ident for var in ordered)
    seen: Counter[str] = Counter()
    names: dict[Var, str] = {}
    for var in ordered:
        if var in names:
            continue
        if counts[var.ident] == 1:
            names[var] = var.ident
        else:
            seen[var.ident] += 1
            names[var] = f"{var.ident}_{seen[var.ident]}"
    return names


def format_clause(clause: Clause) -> str:
    names = display_names(clause)
    shown = clause.rename({var: Var(name, var.uid) for var, name in names.items()})
    parts = [str(fact) for fact in shown.hypotheses]
    parts.extend(str(constraint) for constraint in shown.constraints)
    body = " && ".join(parts) if parts else "true"
    return f"{body} => {shown.conclusion}"


@dataclass(frozen=True, slots=True)
class Equality:
    lhs: Term
    rhs: Term

    def apply(self, subst: Mapping[Var, Term]) -> Equality:
        return Equality(apply(subst, self.lhs), apply(subst, self.rhs))

    @override
    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


class AssertionKind(StrEnum):
    AXIOM = "axiom"
    RESTRICTION = "restriction"
    LEMMA = "lemma"
    INDUCTIVE_LEMMA = "inductive-lemma"


@dataclass(frozen=True, slots=True)
class Assertion:
    """`premises ==> conclusion`, used to strengthen clauses."""

    ident: str
    kind: AssertionKind
    premises: tuple[Fact, ...]
    conclusion: tuple[Fact | Equality, ...]

    @property
    def inductive(self) -> bool:
        return self.kind is AssertionKind.INDUCTIVE_LEMMA

    @property
    def is_lemma(self) -> bool:
        return self.kind in (AssertionKind.LEMMA, AssertionKind.INDUCTIVE_LEMMA)

    @override
    def __str__(self) -> str:
        premises = " && ".join(str(fact) for fact in self.premises)
        conclusion = " && ".join(str(part) for part in self.conclusion)
        return f"{premises} ==> {conclusion}"


def is_tautology(clause: Clause) -> bool:
    return clause.conclusion in clause.hypotheses


def _match_hypotheses(
    pending: list[Fact],
    targets: tuple[Fact, ...],
    used: list[bool],
    subst: Substitution,
    general: Clause,
    specific: Clause,
) -> bool:
    if not pending:
        return implies(specific.constraints, general.constraints.apply(subst))
    head, rest = pending[0], pending[1:]
    for index, target in enumerate(targets):
        if used[index]:
            continue
        extended = match_fact(head, target, subst)
        if extended is None:
            continue
        used[index] = True
        if _match_hypotheses(rest, targets, used, extended, general, specific):
            return True
        used[index] = False
    return False


def subsumes(general: Clause, specific: Clause) -> bool:
    """Whether some σ maps `general` into `specific` (multiset hypotheses, implied constraints).

    Args:
        general: Candidate subsumer
        specific: Clause that may be redundant; its variables stay fixed

    Returns:
        True when `general`σ has the conclusion of `specific`, each of its
        hypotheses maps to a distinct hypothesis of `specific`, and the
        constraints of `specific` imply those of `general`σ.
    """
    if len(general.hypotheses) > len(specific.hypotheses):
        return False
    subst = match_fact(general.conclusion, specific.conclusion, {})
    if subst is None:
        return False
    available = Counter(fact.predicate.ident for fact in specific.hypotheses)
    needed = Counter(fact.predicate.ident for fact in general.hypotheses)
    if any(available[ident] < count for ident, count in needed.items()):
        return False
    # larger hypotheses first: they bind more and fail sooner
    pending = sorted(general.hypotheses, key=lambda fact: -fact.size())
    return _match_hypotheses(pending, specific.hypotheses, [False] * len(specific.hypotheses), subst, general, specific)


def dedupe(clause: Clause) -> Clause:
    """Drop repeated hypotheses, keeping the first occurrence."""
    if len(set(clause.hypotheses)) == len(clause.hypotheses):
        return clause
    first: dict[Fact, int] = {}
    mapping: dict[int, int] = {}
    for index, fact in enumerate(clause.hypotheses):
        mapping[index] = first.setdefault(fact, len(first))
    template = justification.reindex(clause.template, mapping) if clause.template is not None else None
    return replace(clause, hypotheses=tuple(first), template=template)


@dataclass(frozen=True, slots=True)
class DataRule:
    """Where the generator and projection clauses of one data constructor sit in the initial clause list."""

    generator: int
    projections: tuple[int, ...]
    variables: tuple[Var, ...]

    def bindings(self, args: Iterable[Term]) -> tuple[tuple[Var, Term], ...]:
        return tuple(zip(self.variables, args, strict=True))


def _data_args(fact: Fact) -> tuple[str, tuple[Term, ...]] | None:
    if not fact.is_attacker:
        return None
    term = fact.args[0]
    if isinstance(term, App) and term.symbol.kind is SymbolKind.DATA:
        return term.symbol.ident, term.args
    return None


def _decompose_hypotheses(clause: Clause, rules: Mapping[str, DataRule] | None) -> Clause:
    changed = True
    while changed:
        changed = False
        hypotheses: list[Fact] = []
        replacements: list[Template] = []
        for fact in clause.hypotheses:
            data = _data_args(fact)
            if data is None:
                replacements.append(Leaf(len(hypotheses)))
                hypotheses.append(fact)
                continue
            ident, args = data
            changed = True
            start = len(hypotheses)
            hypotheses.extend(att(arg) for arg in args)
            rule = rules.get(ident) if rules is not None else None
            if rule is not None:
                leaves = tuple(Leaf(start + offset) for offset in range(len(args)))
                replacements.append(Step(rule.generator, rule.bindings(args), leaves))
            else:
                replacements.append(Leaf(start))
        if changed:
            template = clause.template
            if template is not None:
                template = justification.remap(template, replacements.__getitem__) if rules is not None else None
            clause = replace(clause, hypotheses=tuple(hypotheses), template=template)
    return clause


def _split_conclusion(clause: Clause, rules: Mapping[str, DataRule] | None) -> list[Clause]:
    data = _data_args(clause.conclusion)
    if data is None:
        return [clause]
    ident, args = data
    rule = rules.get(ident) if rules is not None else None
    parts: list[Clause] = []
    for position, arg in enumerate(args):
        template: Template | None = None
        if rule is not None and clause.template is not None:
            template = Step(rule.projections[position], rule.bindings(args), (clause.template,))
        parts.extend(_split_conclusion(replace(clause, conclusion=att(arg), template=template), rules))
    return parts


def decompose_data(clause: Clause, rules: Mapping[str, DataRule] | None = None, *, exempt: bool | None = None) -> list[Clause]:
    """Flatten data constructors under `att` in hypotheses and split data conclusions.

    Exempt clauses (the generator and projection clauses themselves) come back unchanged.
    Without `rules` the justification template is dropped.

    Args:
        clause: Clause to decompose
        rules: Generator and projection clauses per data constructor, used to
            rewrite the justification template
        exempt: Overrides `clause.exempt` when given

    Returns:
        One clause per component of a data conclusion, or a single clause.
    """
    if clause.exempt if exempt is None else exempt:
        return [clause]
    return _split_conclusion(_decompose_hypotheses(clause, rules), rules)
