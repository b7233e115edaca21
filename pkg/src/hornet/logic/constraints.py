"""Clause constraints: disequations and natural-number difference constraints.

Natural-number constraints are solved as a difference-constraint graph.
Every non-literal term is a node and literals hang off a shared `ZERO` node
with an offset, so `M >= N + n` becomes an edge M -> N of weight
`k_M - k_N - n`. A negative cycle means the set is unsatisfiable; otherwise
the all-pairs shortest distances are the canonical (tightest) form.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Final, Literal, override

import networkx as nx

from hornet.logic.terms import App, Nat, Term, Var, apply, canonical_renaming, unify_pairs, variables_of


class Unsat(Enum):
    """Distinguished result of a constraint simplification that proves the clause vacuous."""

    UNSAT = "unsatisfiable"


UNSAT: Final = Unsat.UNSAT
type Unsatisfiable = Literal[Unsat.UNSAT]


@dataclass(frozen=True, slots=True)
class Diseq:
    """`forall universals. lhs <> rhs`"""

    universals: frozenset[Var]
    lhs: Term
    rhs: Term

    def apply(self, subst: Mapping[Var, Term]) -> Diseq:
        bound = {var: term for var, term in subst.items() if var not in self.universals}
        return Diseq(self.universals, apply(bound, self.lhs), apply(bound, self.rhs))

    def rename(self, renaming: Mapping[Var, Term]) -> Diseq:
        """Rename every variable, universals included."""
        universals = frozenset(v for v in (renaming.get(u, u) for u in self.universals) if isinstance(v, Var))
        return Diseq(universals, apply(renaming, self.lhs), apply(renaming, self.rhs))

    def free_vars(self) -> set[Var]:
        return set(variables_of((self.lhs, self.rhs))) - self.universals

    def key(self) -> tuple[Term, Term]:
        """Comparison key that ignores the naming of universal variables."""
        order = [var for var in variables_of((self.lhs, self.rhs)) if var in self.universals]
        renamed = self.rename(canonical_renaming(order))
        return renamed.lhs, renamed.rhs

    @override
    def __str__(self) -> str:
        body = f"{self.lhs} <> {self.rhs}"
        if not self.universals:
            return body
        names = ",".join(sorted(str(var) for var in self.universals))
        return f"forall {names}. {body}"


@dataclass(frozen=True, slots=True)
class IsNat:
    term: Term

    @override
    def __str__(self) -> str:
        return f"is_nat({self.term})"


@dataclass(frozen=True, slots=True)
class NotNat:
    term: Term

    @override
    def __str__(self) -> str:
        return f"not is_nat({self.term})"


@dataclass(frozen=True, slots=True)
class Geq:
    """`lhs >= rhs + offset`; subtraction is folded into a negative offset."""

    lhs: Term
    rhs: Term
    offset: int = 0

    @override
    def __str__(self) -> str:
        if self.offset == 0:
            return f"{self.lhs} >= {self.rhs}"
        sign = "+" if self.offset > 0 else "-"
        return f"{self.lhs} >= {self.rhs} {sign} {abs(self.offset)}"


type Constraint = Diseq | IsNat | NotNat | Geq


@dataclass(frozen=True, slots=True)
class ConstraintSet:
    diseqs: tuple[Diseq, ...] = ()
    nats: tuple[IsNat, ...] = ()
    not_nats: tuple[NotNat, ...] = ()
    geqs: tuple[Geq, ...] = ()

    @classmethod
    def of(cls, constraints: Iterable[Constraint]) -> ConstraintSet:
        diseqs: list[Diseq] = []
        nats: list[IsNat] = []
        not_nats: list[NotNat] = []
        geqs: list[Geq] = []
        for constraint in constraints:
            match constraint:
                case Diseq():
                    diseqs.append(constraint)
                case IsNat():
                    nats.append(constraint)
                case NotNat():
                    not_nats.append(constraint)
                case Geq():
                    geqs.append(constraint)
        return cls(tuple(diseqs), tuple(nats), tuple(not_nats), tuple(geqs))

    def __iter__(self) -> Iterator[Constraint]:
        yield from self.diseqs
        yield from self.nats
        yield from self.not_nats
        yield from self.geqs

    def __bool__(self) -> bool:
        return bool(self.diseqs or self.nats or self.not_nats or self.geqs)

    def __len__(self) -> int:
        return len(self.diseqs) + len(self.nats) + len(self.not_nats) + len(self.geqs)

    def apply(self, subst: Mapping[Var, Term]) -> ConstraintSet:
        if not subst or not self:
            return self
        return ConstraintSet(
            tuple(diseq.apply(subst) for diseq in self.diseqs),
            tuple(IsNat(apply(subst, c.term)) for c in self.nats),
            tuple(NotNat(apply(subst, c.term)) for c in self.not_nats),
            tuple(Geq(apply(subst, c.lhs), apply(subst, c.rhs), c.offset) for c in self.geqs),
        )

    def rename(self, renaming: Mapping[Var, Term]) -> ConstraintSet:
        if not self:
            return self
        plain = ConstraintSet((), self.nats, self.not_nats, self.geqs).apply(renaming)
        return ConstraintSet(
            tuple(diseq.rename(renaming) for diseq in self.diseqs), plain.nats, plain.not_nats, plain.geqs
        )

    def merge(self, other: ConstraintSet) -> ConstraintSet:
        if not other:
            return self
        if not self:
            return other
        return ConstraintSet(
            self.diseqs + other.diseqs,
            self.nats + other.nats,
            self.not_nats + other.not_nats,
            self.geqs + other.geqs,
        )

    def free_terms(self) -> list[Term]:
        """Terms whose variables are free in this set, for variable collection."""
        terms: list[Term] = []
        for diseq in self.diseqs:
            terms.extend(diseq.free_vars())
        terms.extend(c.term for c in self.nats)
        terms.extend(c.term for c in self.not_nats)
        for geq in self.geqs:
            terms.extend((geq.lhs, geq.rhs))
        return terms

    def universals(self) -> list[Var]:
        return [var for diseq in self.diseqs for var in sorted(diseq.universals, key=lambda v: (v.ident, v.uid))]

    @override
    def __str__(self) -> str:
        return " && ".join(str(constraint) for constraint in self)


EMPTY_CONSTRAINTS: Final = ConstraintSet()


def _simplify_diseq(diseq: Diseq) -> Diseq | Unsatisfiable | None:
    """Return the residual disequation, UNSAT, or None when it always holds."""
    mgu = unify_pairs([(diseq.lhs, diseq.rhs)], prefer=diseq.universals)
    if mgu is None:
        return None
    if all(var in diseq.universals for var in mgu):
        return UNSAT
    used = frozenset(diseq.universals & set(variables_of((diseq.lhs, diseq.rhs))))
    return Diseq(used, diseq.lhs, diseq.rhs)


def simplify_diseqs(cs: ConstraintSet) -> ConstraintSet | Unsatisfiable:
    """Drop disequations that always hold; UNSAT when one can never hold."""
    kept: dict[tuple[Term, Term], Diseq] = {}
    for diseq in cs.diseqs:
        simplified = _simplify_diseq(diseq)
        if simplified is UNSAT:
            return UNSAT
        if simplified is not None:
            kept.setdefault(simplified.key(), simplified)
    return ConstraintSet(tuple(kept.values()), cs.nats, cs.not_nats, cs.geqs)


_ZERO: Final = "0"


def _node_of(term: Term) -> tuple[Term | str, int]:
    if isinstance(term, Nat):
        return _ZERO, term.value
    return term, 0


def _term_of(node: Term | str) -> Term:
    if isinstance(node, str):
        return Nat(0)
    return node


def _sort_key(node: Term | str) -> str:
    return str(node)


@dataclass
class NatSystem:
    """Difference-constraint graph over the natural-number part of a constraint set."""

    graph: nx.DiGraph[Term | str] = field(default_factory=nx.DiGraph)
    nat_terms: set[Term] = field(default_factory=set)
    unsat: bool = False

    @classmethod
    def build(cls, cs: ConstraintSet) -> NatSystem:
        system = cls()
        system.graph.add_node(_ZERO)
        for geq in cs.geqs:
            system._require_nat(geq.lhs)
            system._require_nat(geq.rhs)
            src, src_offset = _node_of(geq.lhs)
            dst, dst_offset = _node_of(geq.rhs)
            system._add_edge(src, dst, src_offset - dst_offset - geq.offset)
        for is_nat in cs.nats:
            system._require_nat(is_nat.term)
        for not_nat in cs.not_nats:
            term = not_nat.term
            if isinstance(term, Nat) or term in system.nat_terms:
                system.unsat = True
        if not system.unsat and system._has_negative_cycle():
            system.unsat = True
        return system

    def _require_nat(self, term: Term) -> None:
        match term:
            case Nat():
                return
            case App():
                self.unsat = True
            case Var():
                self.nat_terms.add(term)
                self._add_edge(term, _ZERO, 0)

    def _add_edge(self, src: Term | str, dst: Term | str, weight: int) -> None:
        if src == dst:
            if weight < 0:
                self.unsat = True
            return
        current = self.graph.get_edge_data(src, dst)
        if current is None or current["weight"] > weight:
            self.graph.add_edge(src, dst, weight=weight)

    def _has_negative_cycle(self) -> bool:
        if self.graph.number_of_edges() == 0:
            return False
        return bool(nx.negative_edge_cycle(self.graph, weight="weight"))

    @cached_property
    def distances(self) -> dict[Term | str, dict[Term | str, int]]:
        return dict(nx.all_pairs_bellman_ford_path_length(self.graph, weight="weight"))

    def distance(self, src: Term | str, dst: Term | str) -> float:
        if src == dst:
            return 0
        return self.distances.get(src, {}).get(dst, math.inf)

    def implies_geq(self, geq: Geq) -> bool:
        """Whether `lhs >= rhs + offset` holds in every solution."""
        if isinstance(geq.lhs, App) or isinstance(geq.rhs, App):
            return False
        if not (self.is_nat(geq.lhs) and self.is_nat(geq.rhs)):
            return False
        src, src_offset = _node_of(geq.lhs)
        dst, dst_offset = _node_of(geq.rhs)
        return self.distance(src, dst) <= src_offset - dst_offset - geq.offset

    def is_nat(self, term: Term) -> bool:
        return isinstance(term, Nat) or term in self.nat_terms

    def canonical(self) -> tuple[tuple[IsNat, ...], tuple[Geq, ...]]:
        nodes = sorted((node for node in self.graph.nodes if node != _ZERO), key=_sort_key)
        geqs: list[Geq] = []
        for src in nodes:
            lower = self.distance(src, _ZERO)
            if lower < 0:
                geqs.append(Geq(_term_of(src), Nat(int(-lower)), 0))
            upper = self.distance(_ZERO, src)
            if upper != math.inf:
                geqs.append(Geq(Nat(int(upper)), _term_of(src), 0))
            for dst in nodes:
                if dst == src:
                    continue
                dist = self.distance(src, dst)
                if dist != math.inf:
                    geqs.append(Geq(_term_of(src), _term_of(dst), int(-dist)))
        nats = tuple(IsNat(term) for term in sorted(self.nat_terms, key=_sort_key))
        return nats, tuple(geqs)


def simplify_nat(cs: ConstraintSet) -> ConstraintSet | Unsatisfiable:
    """Check the natural-number constraints and return their tightened canonical form."""
    if not (cs.nats or cs.not_nats or cs.geqs):
        return cs
    system = NatSystem.build(cs)
    if system.unsat:
        return UNSAT
    nats, geqs = system.canonical()
    not_nats: dict[Term, NotNat] = {}
    for not_nat in cs.not_nats:
        # constructor applications are never natural numbers
        if not isinstance(not_nat.term, App):
            not_nats.setdefault(not_nat.term, not_nat)
    ordered = tuple(not_nats[term] for term in sorted(not_nats, key=_sort_key))
    return ConstraintSet(cs.diseqs, nats, ordered, geqs)


def simplify(cs: ConstraintSet) -> ConstraintSet | Unsatisfiable:
    """Run both simplifiers; UNSAT if either proves the set unsatisfiable."""
    if not cs:
        return cs
    simplified = simplify_diseqs(cs)
    if simplified is UNSAT:
        return UNSAT
    return simplify_nat(simplified)


def implies(premises: ConstraintSet, conclusion: ConstraintSet) -> bool:
    """Sound (incomplete) entailment check used by subsumption.

    `premises` is expected in simplified form.
    """
    if not conclusion:
        return True
    simplified = simplify_diseqs(ConstraintSet(conclusion.diseqs))
    if simplified is UNSAT:
        return False
    known = {diseq.key() for diseq in premises.diseqs}
    if any(diseq.key() not in known for diseq in simplified.diseqs):
        return False
    if not (conclusion.nats or conclusion.not_nats or conclusion.geqs):
        return True
    system = NatSystem.build(premises)
    if any(not system.is_nat(c.term) for c in conclusion.nats):
        return False
    premise_not_nats = {c.term for c in premises.not_nats}
    if any(not isinstance(c.term, App) and c.term not in premise_not_nats for c in conclusion.not_nats):
        return False
    return all(system.implies_geq(geq) for geq in conclusion.geqs)
