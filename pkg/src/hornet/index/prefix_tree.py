"""Prefix (discrimination) tree over facts for unifiable-fact retrieval.

A fact is flattened to the preorder string of its symbols, each tagged with
its arity; variables become a single wildcard token. Retrieval walks the
query string and the tree together: a wildcard on either side skips one
whole subterm on the other side, which the arities make possible without
reconstructing terms. The result is a superset of the stored entries whose
fact unifies with the query.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Final

from hornet.logic.clauses import Fact
from hornet.logic.terms import App, Nat, Term, Var

type Token = tuple[str, int]

WILDCARD: Final[Token] = ("*", 0)


def _term_tokens(term: Term, out: list[Token]) -> None:
    match term:
        case Var():
            out.append(WILDCARD)
        case Nat(value=value):
            out.append((f"#{value}", 0))
        case App(symbol=symbol, args=args):
            out.append((symbol.ident, len(args)))
            for arg in args:
                _term_tokens(arg, out)


def flatten(fact: Fact) -> tuple[Token, ...]:
    out: list[Token] = [(fact.predicate.ident, len(fact.args))]
    for arg in fact.args:
        _term_tokens(arg, out)
    return tuple(out)


def _subterm_ends(tokens: tuple[Token, ...]) -> list[int]:
    """For each position, the index just past the subterm starting there."""
    ends = [0] * len(tokens)
    for start in range(len(tokens) - 1, -1, -1):
        end = start + 1
        for _ in range(tokens[start][1]):
            end = ends[end]
        ends[start] = end
    return ends


@dataclass
class _Node:
    children: dict[Token, _Node] = field(default_factory=dict)
    ids: set[int] = field(default_factory=set)


class PrefixTree:
    """Maps flattened facts to the ids of the clauses they were indexed for."""

    def __init__(self) -> None:
        self._root = _Node()
        self._entries: dict[int, tuple[Token, ...]] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, clause_id: object) -> bool:
        return clause_id in self._entries

    def insert(self, clause_id: int, fact: Fact) -> None:
        tokens = flatten(fact)
        node = self._root
        for token in tokens:
            node = node.children.setdefault(token, _Node())
        node.ids.add(clause_id)
        self._entries[clause_id] = tokens

    def remove(self, clause_id: int) -> None:
        tokens = self._entries.pop(clause_id, None)
        if tokens is None:
            return
        path = [self._root]
        for token in tokens:
            path.append(path[-1].children[token])
        path[-1].ids.discard(clause_id)
        for depth in range(len(tokens), 0, -1):
            node = path[depth]
            if node.ids or node.children:
                break
            del path[depth - 1].children[tokens[depth - 1]]

    def _skip(self, node: _Node, pending: int) -> Iterator[_Node]:
        """Nodes reached from `node` after consuming `pending` complete subterms."""
        if pending == 0:
            yield node
            return
        for token, child in node.children.items():
            yield from self._skip(child, pending - 1 + token[1])

    def _walk(self, node: _Node, query: tuple[Token, ...], ends: list[int], position: int) -> Iterator[int]:
        if position == len(query):
            yield from node.ids
            return
        token = query[position]
        if token == WILDCARD:
            for reached in self._skip(node, 1):
                yield from self._walk(reached, query, ends, position + 1)
            return
        wildcard = node.children.get(WILDCARD)
        if wildcard is not None:
            yield from self._walk(wildcard, query, ends, ends[position])
        exact = node.children.get(token)
        if exact is not None:
            yield from self._walk(exact, query, ends, position + 1)

    def unifiable(self, fact: Fact) -> set[int]:
        query = flatten(fact)
        return set(self._walk(self._root, query, _subterm_ends(query), 0))


def pt_unifiable(tree: PrefixTree, fact: Fact) -> set[int]:
    return tree.unifiable(fact)
