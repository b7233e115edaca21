"""Inference rules of the saturation loop: selection, resolution, strengthening, simplification."""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, replace
from typing import Final, override

from hornet.logic import justification
from hornet.logic.clauses import (
    Assertion,
    Clause,
    DataRule,
    Equality,
    Fact,
    Provenance,
    ProvenanceKind,
    Trigger,
    decompose_data,
    dedupe,
    facts_unifier,
    is_tautology,
    match_fact,
)
from hornet.logic.constraints import UNSAT, simplify
from hornet.logic.terms import Substitution, Term, Var, apply, unify_pairs


@dataclass(frozen=True, slots=True)
class Hypothesis:
    index: int


@dataclass(frozen=True, slots=True)
class Conclusion:
    @override
    def __str__(self) -> str:
        return "conclusion"


type Selection = Hypothesis | Conclusion

CONCLUSION: Final = Conclusion()


def select(clause: Clause) -> Selection:
    """Leftmost hypothesis that is neither blocking nor `att(variable)`; else the conclusion."""
    for index, fact in enumerate(clause.hypotheses):
        if fact.is_blocking:
            continue
        if fact.is_attacker and isinstance(fact.args[0], Var):
            continue
        return Hypothesis(index)
    return CONCLUSION


def is_solved(clause: Clause) -> bool:
    return isinstance(select(clause), Conclusion)


def resolve(
    solved: Clause,
    target: Clause,
    hyp_index: int,
    *,
    parents: tuple[int, ...] = (),
) -> Clause | None:
    """Resolve the conclusion of `solved` with hypothesis `hyp_index` of `target`.

    The clauses need not be renamed apart; `solved` is renamed here.

    Args:
        solved: Clause whose conclusion is selected
        target: Clause whose hypothesis `hyp_index` is selected
        hyp_index: Position of the resolved hypothesis in `target`
        parents: Store ids recorded in the resolvent's provenance

    Returns:
        The resolvent, with the hypotheses of `solved` in place of the
        resolved one, or None when the facts do not unify or the merged
        constraints are unsatisfiable.
    """
    solved = solved.rename()
    hypothesis = target.hypotheses[hyp_index]
    sigma = facts_unifier(solved.conclusion, hypothesis)
    if sigma is None:
        return None
    template = None
    if solved.template is not None and target.template is not None:
        template = justification.plug(target.template, hyp_index, solved.template, len(solved.hypotheses))
    resolvent = Clause(
        (*target.hypotheses[:hyp_index], *solved.hypotheses, *target.hypotheses[hyp_index + 1 :]),
        target.conclusion,
        target.constraints.merge(solved.constraints),
        provenance=Provenance(ProvenanceKind.RESOLVED, parents),
        template=template,
        applied=target.applied | solved.applied,
    ).apply(sigma)
    constraints = simplify(resolvent.constraints)
    if constraints is UNSAT:
        return None
    return replace(resolvent, constraints=constraints)


def native_hypotheses(clause: Clause) -> tuple[Fact, ...]:
    """Hypotheses that stand for a premise of the justification (not ones added by an assertion)."""
    if clause.template is None:
        return clause.hypotheses
    used = set(justification.leaves(clause.template))
    return tuple(fact for index, fact in enumerate(clause.hypotheses) if index in used)


def _premise_matches(
    premises: Sequence[Fact], targets: Sequence[Fact], subst: Substitution
) -> Iterator[Substitution]:
    if not premises:
        yield subst
        return
    head, rest = premises[0], premises[1:]
    for target in targets:
        extended = match_fact(head, target, subst)
        if extended is not None:
            yield from _premise_matches(rest, targets, extended)


def triggers(clause: Clause, assertion: Assertion) -> Iterator[tuple[Trigger, Substitution]]:
    """Every way the premises of `assertion` match facts of `clause`.

    Premises match native hypotheses and, unless the assertion is an
    inductive lemma, the conclusion too.
    """
    targets = list(dict.fromkeys(native_hypotheses(clause)))
    if not assertion.inductive:
        targets.append(clause.conclusion)
    for subst in _premise_matches(assertion.premises, targets, {}):
        instance = tuple(premise.apply(subst) for premise in assertion.premises)
        yield (assertion.ident, instance), subst


type Tracer = Callable[..., None]


def _no_trace(event: str, **fields: object) -> None:
    return None


def strengthen(clause: Clause, assertion: Assertion, trace: Tracer = _no_trace) -> Clause | None:
    """Add the instantiated conclusion of `assertion` for each new trigger.

    Fact conclusions become extra hypotheses; equalities are unified and the
    unifier applied. Each trigger is used at most once per clause.

    Args:
        clause: Clause to strengthen
        assertion: Axiom, restriction or proved lemma
        trace: Receives "clause strengthened" and "clause removed by assertion" events

    Returns:
        The strengthened clause, or None when an equality cannot hold.
    """
    while True:
        found = next(((t, s) for t, s in triggers(clause, assertion) if t not in clause.applied), None)
        if found is None:
            return clause
        trigger, subst = found
        before = clause
        clause = replace(clause, applied=clause.applied | {trigger})
        pairs: list[tuple[Term, Term]] = []
        added: list[Fact] = []
        for part in assertion.conclusion:
            if isinstance(part, Equality):
                pairs.append((apply(subst, part.lhs), apply(subst, part.rhs)))
            else:
                added.append(part.apply(subst))
        if pairs:
            unifier = unify_pairs(pairs)
            if unifier is None:
                trace("clause removed by assertion", assertion=assertion.ident, clause=str(before))
                return None
            clause = clause.apply(unifier)
        fresh = tuple(fact for fact in dict.fromkeys(added) if fact not in clause.hypotheses)
        if fresh or clause != before:
            clause = replace(
                clause,
                hypotheses=(*clause.hypotheses, *fresh),
                provenance=Provenance(ProvenanceKind.STRENGTHENED, before.provenance.parents, assertion.ident),
            )
            trace("clause strengthened", assertion=assertion.ident, clause=str(clause))


@dataclass
class Simplifier:
    """Bring a clause into stored form, possibly splitting it or removing it.

    Steps, repeated until nothing changes: data-constructor decomposition,
    duplicate hypothesis removal, tautology removal, constraint
    simplification and strengthening by every assertion.
    """

    rules: Mapping[str, DataRule]
    assertions: Sequence[Assertion] = ()
    trace: Tracer = _no_trace

    def __call__(self, clause: Clause) -> list[Clause]:
        done: list[Clause] = []
        pending = deque([clause])
        while pending:
            current = pending.popleft()
            for part in decompose_data(current, self.rules):
                result = self._simplify_once(part)
                if result is None:
                    continue
                if result != part:
                    pending.append(result)
                else:
                    done.append(result)
        return done

    def _simplify_once(self, clause: Clause) -> Clause | None:
        clause = dedupe(clause)
        if is_tautology(clause):
            return None
        constraints = simplify(clause.constraints)
        if constraints is UNSAT:
            self.trace("clause removed by constraints", clause=str(clause))
            return None
        clause = replace(clause, constraints=constraints)
        if clause.exempt:
            return clause
        for assertion in self.assertions:
            strengthened = strengthen(clause, assertion, self.trace)
            if strengthened is None:
                return None
            clause = strengthened
        return clause
