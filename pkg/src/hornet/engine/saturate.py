"""Resolution with free selection, run to a fixpoint.

Stored clauses are either solved (conclusion selected) or unsolved (one
hypothesis selected). Clauses are numbered when stored and processed in
that order. Processing a clause resolves it against every stored partner
processed before it, so each solved/unsolved pair meets exactly once.
Every resolvent is simplified, then dropped if a stored clause subsumes
it; otherwise it removes the stored clauses it subsumes and joins the queue.
"""

from __future__ import annotations

import time
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace

from hornet.config import SaturationConfig
from hornet.core.errors import SaturationLimitError
from hornet.core.logging import get_logger
from hornet.engine.rules import Conclusion, Hypothesis, Simplifier, Tracer, resolve, select
from hornet.frontend.generate import InitialClauses, data_rules
from hornet.index.features import FeatureIndex, FeatureScheme
from hornet.index.prefix_tree import PrefixTree
from hornet.logic import justification
from hornet.logic.clauses import Assertion, Clause, Fact, subsumes

logger = get_logger(__name__)


@dataclass
class SaturationStats:
    clauses_generated: int = 0
    clauses_stored: int = 0
    resolutions: int = 0
    subsumption_checks: int = 0
    forward_subsumed: int = 0
    backward_subsumed: int = 0
    index_candidates: int = 0
    solved: int = 0
    unsolved: int = 0
    seconds: float = 0.0

    def as_dict(self) -> dict[str, int | float]:
        return {
            "clauses_generated": self.clauses_generated,
            "clauses_stored": self.clauses_stored,
            "resolutions": self.resolutions,
            "subsumption_checks": self.subsumption_checks,
            "forward_subsumed": self.forward_subsumed,
            "backward_subsumed": self.backward_subsumed,
            "index_candidates": self.index_candidates,
            "solved": self.solved,
            "unsolved": self.unsolved,
        }


@dataclass(frozen=True)
class SaturationResult:
    """Solved clauses by id, the initial clauses they justify against, and counters."""

    solved: dict[int, Clause]
    initial: InitialClauses
    stats: SaturationStats = field(default_factory=SaturationStats)
    complete: bool = True
    limit: str | None = None

    @classmethod
    def from_clauses(cls, clauses: Sequence[Clause]) -> SaturationResult:
        """Treat `clauses` as both the initial and the solved set."""
        numbered = tuple(
            replace(clause, template=justification.initial(index, clause.variables(), len(clause.hypotheses)))
            for index, clause in enumerate(clauses)
        )
        initial = InitialClauses(numbered, data_rules(list(numbered)), 0)
        return cls(dict(enumerate(numbered)), initial)

    def clauses(self) -> list[Clause]:
        return [self.solved[clause_id] for clause_id in sorted(self.solved)]


class ClauseStore:
    """Stored clauses with the indexes that serve subsumption and resolution."""

    def __init__(self, scheme: FeatureScheme, stats: SaturationStats, *, use_index: bool = True) -> None:
        self.use_index = use_index
        self.stats = stats
        self.clauses: dict[int, Clause] = {}
        self.selected: dict[int, int] = {}
        self._next_id = 0
        self._features = FeatureIndex(scheme)
        self._conclusions = PrefixTree()
        self._hypotheses = PrefixTree()

    def __contains__(self, clause_id: object) -> bool:
        return clause_id in self.clauses

    def __len__(self) -> int:
        return len(self.clauses)

    @property
    def next_id(self) -> int:
        return self._next_id

    def solved(self) -> dict[int, Clause]:
        return {cid: clause for cid, clause in self.clauses.items() if cid not in self.selected}

    def _candidates(self, ids: Iterable[int]) -> list[int]:
        ordered = sorted(ids)
        self.stats.index_candidates += len(ordered)
        return ordered

    def is_subsumed(self, clause: Clause) -> bool:
        ids = self._features.forward_candidates(clause) if self.use_index else self.clauses.keys()
        for cid in self._candidates(ids):
            self.stats.subsumption_checks += 1
            if subsumes(self.clauses[cid], clause):
                return True
        return False

    def subsumed_by(self, clause: Clause) -> list[int]:
        ids = self._features.backward_candidates(clause) if self.use_index else self.clauses.keys()
        removed: list[int] = []
        for cid in self._candidates(ids):
            self.stats.subsumption_checks += 1
            if subsumes(clause, self.clauses[cid]):
                removed.append(cid)
        return removed

    def add(self, clause: Clause) -> int:
        cid = self._next_id
        self._next_id += 1
        self.clauses[cid] = clause
        self._features.insert(cid, clause)
        match select(clause):
            case Hypothesis(index=index):
                self.selected[cid] = index
                self._hypotheses.insert(cid, clause.hypotheses[index])
            case Conclusion():
                self._conclusions.insert(cid, clause.conclusion)
        return cid

    def remove(self, cid: int) -> None:
        self.clauses.pop(cid)
        self._features.remove(cid)
        if self.selected.pop(cid, None) is None:
            self._conclusions.remove(cid)
        else:
            self._hypotheses.remove(cid)

    def _partners(self, fact: Fact, tree: PrefixTree, *, want_solved: bool) -> list[int]:
        if self.use_index:
            ids: Iterable[int] = tree.unifiable(fact)
        else:
            ids = (cid for cid in self.clauses if (cid not in self.selected) == want_solved)
        return self._candidates(ids)

    def unsolved_partners(self, conclusion: Fact) -> list[int]:
        """Unsolved clauses whose selected hypothesis may unify with `conclusion`."""
        return self._partners(conclusion, self._hypotheses, want_solved=False)

    def solved_partners(self, hypothesis: Fact) -> list[int]:
        """Solved clauses whose conclusion may unify with `hypothesis`."""
        return self._partners(hypothesis, self._conclusions, want_solved=True)


class Saturation:
    """One run of the saturation loop."""

    def __init__(
        self,
        initial: InitialClauses,
        assertions: Sequence[Assertion] = (),
        config: SaturationConfig | None = None,
        trace: Tracer | None = None,
    ) -> None:
        self.initial = initial
        self.config = config or SaturationConfig()
        self.trace: Tracer = trace or (lambda event, **fields: None)
        self.stats = SaturationStats()
        self.simplifier = Simplifier(initial.rules, tuple(assertions), self.trace)
        scheme = FeatureScheme.from_clauses(initial.clauses, self.config.feature_top_k)
        self.store = ClauseStore(scheme, self.stats, use_index=self.config.use_index)
        self.queue: deque[int] = deque()

    def _result(self, *, complete: bool, limit: str | None = None) -> SaturationResult:
        solved = self.store.solved()
        self.stats.solved = len(solved)
        self.stats.unsolved = len(self.store) - len(solved)
        return SaturationResult(solved, self.initial, self.stats, complete, limit)

    def _limit(self, limit: str, message: str) -> SaturationLimitError:
        logger.warning("Saturation limit exceeded", limit=limit, stored=self.store.next_id)
        return SaturationLimitError(message, limit, self._result(complete=False, limit=limit))

    def offer(self, clause: Clause) -> None:
        """Simplify `clause` and store what survives subsumption."""
        for simplified in self.simplifier(clause):
            self.stats.clauses_generated += 1
            if simplified.depth > self.config.max_term_depth:
                raise self._limit("max-term-depth", f"a clause exceeded term depth {self.config.max_term_depth}")
            if self.store.is_subsumed(simplified):
                self.stats.forward_subsumed += 1
                continue
            for cid in self.store.subsumed_by(simplified):
                self.store.remove(cid)
                self.stats.backward_subsumed += 1
                self.trace("clause subsumed", id=cid)
            if self.store.next_id >= self.config.max_clauses:
                raise self._limit("max-clauses", f"more than {self.config.max_clauses} clauses were stored")
            cid = self.store.add(simplified)
            self.stats.clauses_stored += 1
            self.queue.append(cid)
            self.trace("clause added", id=cid, clause=str(simplified), provenance=str(simplified.provenance))

    def _process(self, cid: int) -> None:
        clause = self.store.clauses[cid]
        selection = self.store.selected.get(cid)
        if selection is None:
            for partner in self.store.unsolved_partners(clause.conclusion):
                if partner >= cid or partner not in self.store:
                    continue
                target = self.store.clauses[partner]
                self._resolve(clause, target, self.store.selected[partner], (cid, partner))
                if cid not in self.store:
                    return
        else:
            for partner in self.store.solved_partners(clause.hypotheses[selection]):
                if partner >= cid or partner not in self.store:
                    continue
                self._resolve(self.store.clauses[partner], clause, selection, (partner, cid))
                if cid not in self.store:
                    return

    def _resolve(self, solved: Clause, target: Clause, index: int, parents: tuple[int, int]) -> None:
        self.stats.resolutions += 1
        resolvent = resolve(solved, target, index, parents=parents)
        if resolvent is not None:
            self.offer(resolvent)

    def run(self) -> SaturationResult:
        started = time.perf_counter()
        logger.info("Saturation started", initial=len(self.initial), index=self.config.use_index)
        try:
            for clause in self.initial.clauses:
                self.offer(clause)
            while self.queue:
                cid = self.queue.popleft()
                if cid in self.store:
                    self._process(cid)
        finally:
            self.stats.seconds = time.perf_counter() - started
        result = self._result(complete=True)
        logger.info("Saturation finished", **result.stats.as_dict())
        return result


def saturate(
    initial: InitialClauses,
    assertions: Sequence[Assertion] = (),
    config: SaturationConfig | None = None,
    trace: Tracer | None = None,
) -> SaturationResult:
    """Saturate `initial` to a fixpoint and return the solved clauses.

    Raises:
        SaturationLimitError: when a clause or depth limit trips; the error
            carries the partial result.
    """
    return Saturation(initial, assertions, config, trace).run()
