"""Derivations over the initial clauses: unfolding, certificate checking and rendering.

The backward search finds a tree of *solved* clauses. Each solved clause
carries a justification template, so the tree unfolds into one that only
applies initial clauses, which is what gets checked and shown to the user.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from hornet.logic.clauses import Clause, Fact, match_fact
from hornet.logic.constraints import UNSAT, ConstraintSet, simplify
from hornet.logic.justification import Leaf, Step, Template
from hornet.logic.terms import Term, Var


@dataclass(frozen=True)
class Derivation:
    """One application of initial clause `clause` deriving `fact`.

    `children` follow the clause's non-blocking hypotheses in order;
    blocking hypotheses appear as `assumptions`.
    """

    fact: Fact
    clause: int
    bindings: tuple[tuple[Var, Term], ...]
    children: tuple[Derivation, ...] = ()
    assumptions: tuple[Fact, ...] = ()
    label: str = ""

    @cached_property
    def depth(self) -> int:
        return 1 + max((child.depth for child in self.children), default=0)

    def nodes(self) -> Iterator[Derivation]:
        yield self
        for child in self.children:
            yield from child.nodes()

    def uses(self, clause_index: int) -> int:
        return sum(1 for node in self.nodes() if node.clause == clause_index)

    def all_assumptions(self) -> list[Fact]:
        return list(dict.fromkeys(fact for node in self.nodes() for fact in node.assumptions))


@dataclass(frozen=True)
class SearchNode:
    """A solved clause instance used by the backward search.

    `children` has one entry per hypothesis of `clause`; blocking
    hypotheses are assumed and have None.
    """

    clause_id: int
    clause: Clause
    children: tuple[SearchNode | None, ...]

    @property
    def depth(self) -> int:
        return 1 + max((child.depth for child in self.children if child is not None), default=0)


class UnfoldError(ValueError):
    """A justification template does not fit the initial clauses."""


def _expand(template: Template, hypotheses: Sequence[Derivation | None], initial: Sequence[Clause]) -> Derivation:
    match template:
        case Leaf(index=index):
            derived = hypotheses[index]
            if derived is None:
                raise UnfoldError(f"hypothesis {index} is assumed but a derivation is required")
            return derived
        case Step(clause=clause_index, children=children):
            clause = initial[clause_index]
            if len(children) != len(clause.hypotheses):
                raise UnfoldError(f"template for clause {clause_index} has {len(children)} children")
            subst = template.subst
            kids: list[Derivation] = []
            assumptions: list[Fact] = []
            for hypothesis, child in zip(clause.hypotheses, children, strict=True):
                if hypothesis.is_blocking:
                    assumptions.append(hypothesis.apply(subst))
                else:
                    kids.append(_expand(child, hypotheses, initial))
            return Derivation(
                clause.conclusion.apply(subst),
                clause_index,
                template.bindings,
                tuple(kids),
                tuple(assumptions),
                clause.label,
            )


def unfold(node: SearchNode, initial: Sequence[Clause]) -> Derivation:
    """Rewrite a solved-clause search tree into a derivation over `initial`."""
    hypotheses = [None if child is None else unfold(child, initial) for child in node.children]
    template = node.clause.template
    if template is None:
        raise UnfoldError(f"clause {node.clause_id} has no justification")
    return _expand(template, hypotheses, initial)


def _check_node(node: Derivation, initial: Sequence[Clause], constraints: list[ConstraintSet]) -> bool:
    if not 0 <= node.clause < len(initial):
        return False
    clause = initial[node.clause]
    subst = dict(node.bindings)
    if set(clause.variables()) - subst.keys():
        return False
    instance = clause.apply(subst)
    if instance.conclusion != node.fact:
        return False
    required = [fact for fact in instance.hypotheses if not fact.is_blocking]
    assumed = [fact for fact in instance.hypotheses if fact.is_blocking]
    if [child.fact for child in node.children] != required or list(node.assumptions) != assumed:
        return False
    constraints.append(instance.constraints)
    return all(_check_node(child, initial, constraints) for child in node.children)


def check_derivation(derivation: Derivation, initial: Sequence[Clause], goal: Fact | None = None) -> bool:
    """Replay `derivation` against the initial clauses.

    Every node must be an instance of the initial clause it names, its
    children must derive exactly that instance's non-blocking hypotheses and
    the constraints collected along the way must be jointly satisfiable.
    When `goal` is given, the root fact must be an instance of it.
    """
    if goal is not None and match_fact(goal, derivation.fact, {}) is None:
        return False
    constraints: list[ConstraintSet] = []
    if not _check_node(derivation, initial, constraints):
        return False
    joint = ConstraintSet()
    for part in constraints:
        joint = joint.merge(part)
    return simplify(joint) is not UNSAT


def _format_bindings(bindings: tuple[tuple[Var, Term], ...]) -> str:
    shown = [f"{var}={term}" for var, term in bindings if var != term]
    return "{" + ", ".join(shown) + "}" if shown else ""


def format_text(derivation: Derivation, indent: str = "    ") -> str:
    """Indented tree, one line per clause application."""
    lines: list[str] = []

    def walk(node: Derivation, level: int) -> None:
        pad = indent * level
        label = f" {node.label}" if node.label else ""
        lines.append(f"{pad}{node.fact}  <- #{node.clause}{label}")
        for fact in node.assumptions:
            lines.append(f"{pad}{indent}assumes {fact}")
        for child in node.children:
            walk(child, level + 1)

    walk(derivation, 0)
    return "\n".join(lines)


def _quoted(text: str) -> str:
    return '"' + text.replace('"', "'") + '"'


def to_graph(derivation: Derivation) -> nx.DiGraph[str]:
    """One node per clause application, edges from conclusion to premises."""
    graph: nx.DiGraph[str] = nx.DiGraph()
    counter = 0

    def add(node: Derivation) -> str:
        nonlocal counter
        ident = f"n{counter}"
        counter += 1
        bindings = _format_bindings(node.bindings)
        label = f"{node.fact}\\n#{node.clause} {node.label}" + (f"\\n{bindings}" if bindings else "")
        graph.add_node(ident, label=_quoted(label), shape="box")
        for fact in node.assumptions:
            assumed = f"n{counter}"
            counter += 1
            graph.add_node(assumed, label=_quoted(str(fact)), shape="ellipse", style="dashed")
            graph.add_edge(ident, assumed)
        for child in node.children:
            graph.add_edge(ident, add(child))
        return ident

    add(derivation)
    return graph


def format_dot(derivation: Derivation, title: str = "derivation") -> str:
    dot = nx.drawing.nx_pydot.to_pydot(to_graph(derivation))
    dot.set_name("derivation")
    dot.set("label", _quoted(title))
    dot.set("labelloc", "t")
    return str(dot.to_string())
