"""Feature-vector index over stored clauses for subsumption candidate retrieval.

A feature vector counts things that can only grow under instantiation and
hypothesis addition: the number of hypotheses, the total term size, the
occurrences of the most frequent symbols (plus one bucket for the rest) and
the hypotheses per predicate. If C subsumes D then fv(C) <= fv(D) holds
componentwise, so a trie keyed by vector components answers "who could
subsume this" and "whom could this subsume" with no false negatives.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from hornet.logic.clauses import Clause
from hornet.logic.terms import symbols

type FeatureVector = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class FeatureScheme:
    """Which symbols and predicates get their own vector component."""

    symbols: tuple[str, ...] = ()
    predicates: tuple[str, ...] = ()

    @classmethod
    def from_clauses(cls, clauses: Iterable[Clause], top_k: int) -> FeatureScheme:
        symbol_counts: Counter[str] = Counter()
        predicates: dict[str, None] = {}
        for clause in clauses:
            for fact in clause.facts():
                predicates.setdefault(fact.predicate.ident, None)
                for arg in fact.args:
                    symbol_counts.update(symbols(arg))
        ranked = sorted(symbol_counts.items(), key=lambda item: (-item[1], item[0]))
        return cls(tuple(ident for ident, _ in ranked[:top_k]), tuple(sorted(predicates)))

    def vector(self, clause: Clause) -> FeatureVector:
        symbol_counts: Counter[str] = Counter()
        total_size = 0
        for fact in clause.facts():
            total_size += fact.size()
            for arg in fact.args:
                symbol_counts.update(symbols(arg))
        tracked = set(self.symbols)
        overflow = sum(count for ident, count in symbol_counts.items() if ident not in tracked)
        predicate_counts = Counter(fact.predicate.ident for fact in clause.hypotheses)
        known = set(self.predicates)
        other_predicates = sum(count for ident, count in predicate_counts.items() if ident not in known)
        return (
            len(clause.hypotheses),
            total_size,
            *(symbol_counts[ident] for ident in self.symbols),
            overflow,
            *(predicate_counts[ident] for ident in self.predicates),
            other_predicates,
        )


def dominated_by(smaller: FeatureVector, larger: FeatureVector) -> bool:
    return all(a <= b for a, b in zip(smaller, larger, strict=True))


@dataclass
class _Node:
    children: dict[int, _Node] = field(default_factory=dict)
    ids: set[int] = field(default_factory=set)


class FeatureIndex:
    """Trie over feature vectors; leaves hold clause ids."""

    def __init__(self, scheme: FeatureScheme) -> None:
        self.scheme = scheme
        self._root = _Node()
        self._vectors: dict[int, FeatureVector] = {}

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, clause_id: object) -> bool:
        return clause_id in self._vectors

    def insert(self, clause_id: int, clause: Clause) -> FeatureVector:
        vector = self.scheme.vector(clause)
        node = self._root
        for component in vector:
            node = node.children.setdefault(component, _Node())
        node.ids.add(clause_id)
        self._vectors[clause_id] = vector
        return vector

    def remove(self, clause_id: int) -> None:
        vector = self._vectors.pop(clause_id, None)
        if vector is None:
            return
        path = [self._root]
        for component in vector:
            path.append(path[-1].children[component])
        path[-1].ids.discard(clause_id)
        for depth in range(len(vector), 0, -1):
            node = path[depth]
            if node.ids or node.children:
                break
            del path[depth - 1].children[vector[depth - 1]]

    def _walk(self, node: _Node, vector: FeatureVector, depth: int, *, upward: bool) -> Iterator[int]:
        if depth == len(vector):
            yield from node.ids
            return
        bound = vector[depth]
        for component, child in node.children.items():
            if (component >= bound) if upward else (component <= bound):
                yield from self._walk(child, vector, depth + 1, upward=upward)

    def forward_candidates(self, clause: Clause) -> set[int]:
        """Ids of stored clauses that might subsume `clause` (fv(stored) <= fv(clause))."""
        return set(self._walk(self._root, self.scheme.vector(clause), 0, upward=False))

    def backward_candidates(self, clause: Clause) -> set[int]:
        """Ids of stored clauses that `clause` might subsume (fv(clause) <= fv(stored))."""
        return set(self._walk(self._root, self.scheme.vector(clause), 0, upward=True))


def fv_of(clause: Clause, scheme: FeatureScheme | None = None) -> FeatureVector:
    """Feature vector of `clause`; without a scheme only the scheme-independent components count."""
    return (scheme or FeatureScheme()).vector(clause)


def fv_forward_candidates(index: FeatureIndex, clause: Clause) -> set[int]:
    return index.forward_candidates(clause)


def fv_backward_candidates(index: FeatureIndex, clause: Clause) -> set[int]:
    return index.backward_candidates(clause)
