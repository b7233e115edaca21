"""Justification templates linking a stored clause back to the initial clauses.

A template for a clause `H1 && ... && Hn => C` is a tree whose inner nodes
apply an initial clause under a substitution and whose leaves are indexes
into the clause's own hypotheses. Instantiating the leaves with derivations
of the hypotheses yields a derivation of the conclusion that uses initial
clauses only.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property

from hornet.logic.terms import Term, Var, apply


@dataclass(frozen=True, slots=True)
class Leaf:
    index: int


@dataclass(frozen=True)
class Step:
    clause: int
    bindings: tuple[tuple[Var, Term], ...]
    children: tuple[Template, ...]

    @cached_property
    def subst(self) -> dict[Var, Term]:
        return dict(self.bindings)


type Template = Leaf | Step


def initial(clause_index: int, clause_vars: Iterable[Var], hypothesis_count: int) -> Step:
    return Step(
        clause_index,
        tuple((var, var) for var in clause_vars),
        tuple(Leaf(i) for i in range(hypothesis_count)),
    )


def remap(template: Template, replace: Callable[[int], Template]) -> Template:
    match template:
        case Leaf(index=index):
            return replace(index)
        case Step():
            return Step(template.clause, template.bindings, tuple(remap(child, replace) for child in template.children))


def shift(template: Template, offset: int) -> Template:
    if offset == 0:
        return template
    return remap(template, lambda index: Leaf(index + offset))


def plug(outer: Template, position: int, inner: Template, inner_width: int) -> Template:
    """Replace leaf `position` of `outer` by `inner`, whose own leaves take its place in order."""

    def replace(index: int) -> Template:
        if index < position:
            return Leaf(index)
        if index == position:
            return shift(inner, position)
        return Leaf(index + inner_width - 1)

    return remap(outer, replace)


def reindex(template: Template, mapping: Mapping[int, int]) -> Template:
    return remap(template, lambda index: Leaf(mapping[index]))


def substitute(template: Template, subst: Mapping[Var, Term]) -> Template:
    """Apply `subst` to every binding's image."""
    if not subst:
        return template
    match template:
        case Leaf():
            return template
        case Step():
            return Step(
                template.clause,
                tuple((var, apply(subst, term)) for var, term in template.bindings),
                tuple(substitute(child, subst) for child in template.children),
            )


def leaves(template: Template) -> Iterator[int]:
    match template:
        case Leaf(index=index):
            yield index
        case Step(children=children):
            for child in children:
                yield from leaves(child)
