"""Decide queries against a saturated clause set.

Derivability is decided by iterative-deepening backward search over the
solved clauses: the goal is unified with a solved conclusion and every
non-blocking hypothesis becomes a subgoal, while blocking hypotheses are
assumed. Failures are memoized per goal (modulo renaming) and depth.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Final

from hornet.config import DEFAULT_DERIVATION_DEPTH
from hornet.core.logging import get_logger
from hornet.engine.derivation import Derivation, SearchNode, unfold
from hornet.engine.saturate import SaturationResult
from hornet.frontend.spec import Correspondence, Query, Secrecy
from hornet.logic.clauses import Assertion, Clause, Equality, Fact, facts_unifier, match_fact
from hornet.logic.terms import Substitution, Var, apply, canonical_renaming, unify_pairs, variables_of

logger = get_logger(__name__)

FALSE_ATTACK_CAVEAT: Final = "clause-level derivation; may be a false attack"
_NEVER: Final = 1 << 30


class VerdictKind(StrEnum):
    PROVED = "PROVED"
    DERIVABLE = "DERIVABLE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    derivation: Derivation | None = None
    reason: str | None = None
    depth: int | None = None
    clause_id: int | None = None

    @property
    def proved(self) -> bool:
        return self.kind is VerdictKind.PROVED


PROVED: Final = Verdict(VerdictKind.PROVED)


def _goal_key(fact: Fact) -> Fact:
    return fact.apply(canonical_renaming(variables_of(fact.args)))


@dataclass
class BackwardSearch:
    """Iterative-deepening search for a derivation of a goal from solved clauses."""

    solved: Mapping[int, Clause]
    depth_limit: int = DEFAULT_DERIVATION_DEPTH
    # deepest depth at which a goal (canonical form) is known to fail
    _failed: dict[Fact, int] = field(default_factory=dict, init=False)
    _cut: bool = field(default=False, init=False)

    def __post_init__(self) -> None:
        self._order = sorted(self.solved)

    def _candidates(self, fact: Fact, root: int | None) -> Iterator[int]:
        ids = self._order if root is None else [root]
        for clause_id in ids:
            conclusion = self.solved[clause_id].conclusion
            if conclusion.predicate.ident == fact.predicate.ident:
                yield clause_id

    def _derive(
        self, fact: Fact, depth: int, theta: Substitution, root: int | None = None
    ) -> Iterator[tuple[Substitution, SearchNode]]:
        goal = fact.apply(theta)
        key = _goal_key(goal)
        if root is None and self._failed.get(key, -1) >= depth:
            if self._failed[key] != _NEVER:
                self._cut = True
            return
        produced = False
        cut_before = self._cut
        self._cut = False
        for clause_id in self._candidates(goal, root):
            clause = self.solved[clause_id].rename()
            start = facts_unifier(clause.conclusion, goal, theta)
            if start is None:
                continue
            if depth <= 1 and any(not hyp.is_blocking for hyp in clause.hypotheses):
                self._cut = True
                continue
            order = _subgoal_order(clause.hypotheses, start)
            ordered = tuple(clause.hypotheses[index] for index in order)
            for extended, found in self._derive_all(ordered, 0, depth - 1, start):
                produced = True
                children: list[SearchNode | None] = [None] * len(order)
                for position, index in enumerate(order):
                    children[index] = found[position]
                yield extended, SearchNode(clause_id, clause, tuple(children))
        if not produced and root is None:
            self._failed[key] = _NEVER if not self._cut else max(self._failed.get(key, -1), depth)
        self._cut = self._cut or cut_before

    def _derive_all(
        self, hypotheses: tuple[Fact, ...], index: int, depth: int, theta: Substitution
    ) -> Iterator[tuple[Substitution, tuple[SearchNode | None, ...]]]:
        if index == len(hypotheses):
            yield theta, ()
            return
        hypothesis = hypotheses[index]
        if hypothesis.is_blocking:
            for extended, rest in self._derive_all(hypotheses, index + 1, depth, theta):
                yield extended, (None, *rest)
            return
        for extended, node in self._derive(hypothesis, depth, theta):
            for final, rest in self._derive_all(hypotheses, index + 1, depth, extended):
                yield final, (node, *rest)

    def search(self, goal: Fact, root: int | None = None) -> tuple[SearchNode | None, int | None, bool]:
        """Return (witness, depth, exhausted).

        `exhausted` is True when no depth cut occurred, so a missing witness
        means the goal is not derivable at all.
        """
        for depth in range(1, self.depth_limit + 1):
            self._cut = False
            found = next(self._derive(goal, depth, {}, root), None)
            if found is not None:
                theta, node = found
                return _instantiate(node, theta), depth, False
            if not self._cut:
                return None, None, True
        return None, None, False


def _subgoal_order(hypotheses: tuple[Fact, ...], theta: Substitution) -> list[int]:
    # att(x) with x unbound holds for every derivable term; try it last
    def unbound(index: int) -> bool:
        fact = hypotheses[index]
        return fact.is_attacker and isinstance(apply(theta, fact.args[0]), Var)

    return sorted(range(len(hypotheses)), key=unbound)


def _instantiate(node: SearchNode, theta: Substitution) -> SearchNode:
    return SearchNode(
        node.clause_id,
        node.clause.apply(theta),
        tuple(None if child is None else _instantiate(child, theta) for child in node.children),
    )


def _inconclusive_reason(result: SaturationResult, depth_limit: int) -> str:
    if not result.complete:
        return f"saturation limit exceeded ({result.limit})"
    return f"derivation depth limit {depth_limit} reached"


def derivable(goal: Fact, result: SaturationResult, depth_limit: int = DEFAULT_DERIVATION_DEPTH) -> Verdict:
    """Decide whether some instance of `goal` is derivable from the saturated set.

    Args:
        goal: Fact to derive; its variables are existential
        result: Saturated clause set, possibly partial
        depth_limit: Iterative-deepening bound of the backward search

    Returns:
        DERIVABLE with a derivation over the initial clauses, PROVED when the
        search is exhausted on a complete saturation, INCONCLUSIVE otherwise.
    """
    search = BackwardSearch(result.solved, depth_limit)
    witness, depth, exhausted = search.search(goal)
    if witness is not None:
        derivation = unfold(witness, result.initial.clauses)
        logger.debug("Goal derivable", goal=str(goal), depth=depth, clause_id=witness.clause_id)
        return Verdict(VerdictKind.DERIVABLE, derivation, depth=depth, clause_id=witness.clause_id)
    if exhausted and result.complete:
        return PROVED
    return Verdict(VerdictKind.INCONCLUSIVE, reason=_inconclusive_reason(result, depth_limit))


def _equate(equality: Equality, subst: Substitution) -> Substitution | None:
    lhs, rhs = apply(subst, equality.lhs), apply(subst, equality.rhs)
    free = frozenset(var for var in variables_of((lhs, rhs)) if var not in subst)
    unifier = unify_pairs([(lhs, rhs)], prefer=free)
    if unifier is None or any(var not in free for var in unifier):
        return None
    return {**{var: apply(unifier, term) for var, term in subst.items()}, **unifier}


def _required_matched(required: tuple[Fact | Equality, ...], blocking: list[Fact], subst: Substitution) -> bool:
    if not required:
        return True
    head, rest = required[0], required[1:]
    if isinstance(head, Equality):
        equated = _equate(head, subst)
        return equated is not None and _required_matched(rest, blocking, equated)
    for target in blocking:
        extended = match_fact(head, target, subst)
        if extended is not None and _required_matched(rest, blocking, extended):
            return True
    return False


def violates(query: Correspondence, clause: Clause) -> Fact | None:
    """The conclusion instance of `clause` that breaks `query`, or None.

    The query premise is unified with the clause conclusion, binding query
    variables in preference to clause variables; every required fact must
    then match a blocking hypothesis and every required equality must hold,
    clause variables held fixed.
    """
    premise_vars = frozenset(variables_of(query.premise.args))
    if query.premise.predicate.ident != clause.conclusion.predicate.ident:
        return None
    pairs = list(zip(query.premise.args, clause.conclusion.args, strict=True))
    sigma = unify_pairs(pairs, prefer=premise_vars)
    if sigma is None:
        return None
    clause_sigma = {var: term for var, term in sigma.items() if var not in premise_vars}
    instance = clause.apply(clause_sigma)
    blocking = [fact for fact in instance.hypotheses if fact.is_blocking]
    query_sigma: Substitution = {var: apply(clause_sigma, term) for var, term in sigma.items() if var in premise_vars}
    required = tuple(part.apply(query_sigma) for part in query.required)
    if _required_matched(required, blocking, {var: var for var in instance.variables()}):
        return None
    return instance.conclusion


def check_correspondence(
    query: Correspondence, result: SaturationResult, depth_limit: int = DEFAULT_DERIVATION_DEPTH
) -> Verdict:
    """Check that every solved clause concluding the premise carries the required events.

    A violating clause only counts once the backward search derives its
    conclusion instance with that clause at the root.
    """
    search = BackwardSearch(result.solved, depth_limit)
    cut = False
    for clause_id in sorted(result.solved):
        clause = result.solved[clause_id].rename()
        instance = violates(query, clause)
        if instance is None:
            continue
        witness, depth, exhausted = search.search(instance, root=clause_id)
        if witness is not None:
            derivation = unfold(witness, result.initial.clauses)
            logger.debug("Correspondence violated", query=str(query), clause_id=clause_id, depth=depth)
            return Verdict(
                VerdictKind.DERIVABLE,
                derivation,
                reason=f"solved clause #{clause_id} lacks the required events",
                depth=depth,
                clause_id=clause_id,
            )
        cut = cut or not exhausted
    if cut or not result.complete:
        return Verdict(VerdictKind.INCONCLUSIVE, reason=_inconclusive_reason(result, depth_limit))
    return PROVED


def lemma_query(lemma: Assertion) -> Correspondence | None:
    """The correspondence whose proof establishes `lemma`, or None.

    Only lemmas with a single non-blocking premise can be checked against
    solved clauses; premises over blocking predicates are never concluded.
    """
    if len(lemma.premises) != 1 or lemma.premises[0].is_blocking:
        return None
    return Correspondence(lemma.premises[0], lemma.conclusion)


def check_lemma(lemma: Assertion, result: SaturationResult, depth_limit: int = DEFAULT_DERIVATION_DEPTH) -> Verdict:
    """Decide whether `lemma` holds on the saturated set.

    Args:
        lemma: A lemma or inductive lemma. An inductive lemma must already
            have strengthened the hypotheses of `result`.
        result: Saturation run without the lemma, or with it for the inductive kind
        depth_limit: Iterative-deepening bound of the derivation search

    Returns:
        PROVED when the lemma may be used to strengthen clauses, DERIVABLE with
        a counterexample derivation, INCONCLUSIVE otherwise.
    """
    query = lemma_query(lemma)
    if query is None:
        return Verdict(VerdictKind.INCONCLUSIVE, reason="lemma needs exactly one non-blocking premise to be proved")
    return check_correspondence(query, result, depth_limit)


def decide(query: Query, result: SaturationResult, depth_limit: int = DEFAULT_DERIVATION_DEPTH) -> Verdict:
    match query:
        case Secrecy(goal=goal):
            return derivable(goal, result, depth_limit)
        case Correspondence():
            return check_correspondence(query, result, depth_limit)
