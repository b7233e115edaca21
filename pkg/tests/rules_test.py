from typing import Any

from hornet.engine.rules import CONCLUSION, Hypothesis, Simplifier, is_solved, resolve, select, strengthen
from hornet.frontend.generate import precise_axiom
from hornet.logic import justification
from hornet.logic.clauses import (
    Assertion,
    AssertionKind,
    Clause,
    Fact,
    Predicate,
    PredicateKind,
    ProvenanceKind,
    att,
)
from hornet.logic.constraints import ConstraintSet, Diseq
from hornet.logic.justification import Leaf, Step
from hornet.logic.terms import App, Symbol, SymbolKind, Var, name
from tests.oracles import A, B, F, PAIR, const

SENC = Symbol("senc", 2, SymbolKind.CONSTRUCTOR)
PRECISE = Predicate("Precise", 2, PredicateKind.BLOCKING)
SEEN = Predicate("seen", 1, PredicateKind.BLOCKING)
k, k1, k2, s, occ = (name(Symbol(ident, 0, SymbolKind.NAME, private=True)) for ident in ("k", "k1", "k2", "s", "occ"))
a, b = const(A), const(B)
x, y, m, o = Var("x", 1), Var("y", 2), Var("m", 3), Var("o", 4)


def _senc(message: App | Var, key: App | Var) -> App:
    return App(SENC, (message, key))


def _precise(occurrence: App | Var, message: App | Var) -> Fact:
    return Fact(PRECISE, (occurrence, message))


class _Recorder:
    def __init__(self) -> None:
        self.events: list[tuple[str, dict[str, Any]]] = []

    def __call__(self, event: str, **fields: Any) -> None:
        self.events.append((event, fields))

    def named(self, event: str) -> list[dict[str, Any]]:
        return [fields for name_, fields in self.events if name_ == event]


def test_select_skips_blocking_and_variable_attacker_facts() -> None:
    assert select(Clause((_precise(o, x), att(x)), att(y))) is CONCLUSION
    assert select(Clause((att(x), att(App(F, (x,)))), att(x))) == Hypothesis(1)
    assert select(Clause((), att(a))) is CONCLUSION


def test_is_solved() -> None:
    assert is_solved(Clause((att(x),), att(App(F, (x,)))))
    assert not is_solved(Clause((att(_senc(x, k)),), att(x)))


def test_resolve_unifies_conclusion_with_selected_hypothesis() -> None:
    solved = Clause((), att(_senc(k1, k)))
    target = Clause((_precise(o, _senc(y, k)), att(_senc(y, k))), att(y))

    resolvent = resolve(solved, target, 1, parents=(0, 1))

    assert resolvent is not None
    assert str(resolvent) == "event(Precise(o,senc(k1,k))) => att(k1)"
    assert resolvent.provenance.kind is ProvenanceKind.RESOLVED
    assert resolvent.provenance.parents == (0, 1)


def test_resolve_inserts_solved_hypotheses_in_place() -> None:
    solved = Clause((att(x), att(y)), att(App(PAIR, (x, y))))
    target = Clause((att(a), att(App(PAIR, (m, b))), att(m)), att(App(F, (m,))))

    resolvent = resolve(solved, target, 1)

    assert resolvent is not None
    assert resolvent.hypotheses == (att(a), att(m), att(b), att(m))


def test_resolve_fails_without_unifier() -> None:
    assert resolve(Clause((), att(a)), Clause((att(App(F, (x,))),), att(x)), 0) is None


def test_resolve_drops_unsatisfiable_constraints() -> None:
    solved = Clause((), att(a))
    target = Clause((att(x),), att(App(F, (x,))), ConstraintSet.of([Diseq(frozenset(), x, a)]))

    assert resolve(solved, target, 0) is None
    assert resolve(Clause((), att(b)), target, 0) is not None


def test_resolve_composes_justifications() -> None:
    solved = Clause((), att(App(F, (a,))), template=justification.initial(0, (), 0))
    target = Clause((att(App(F, (x,))),), att(x), template=justification.initial(1, (x,), 1))

    resolvent = resolve(solved, target, 0)

    assert resolvent is not None
    assert isinstance(resolvent.template, Step)
    assert resolvent.template.clause == 1
    assert resolvent.template.children == (Step(0, (), ()),)
    assert resolvent.template.subst == {x: a}


def test_strengthen_removes_clause_when_equality_fails() -> None:
    recorder = _Recorder()
    clause = Clause((_precise(occ, _senc(k1, k)), _precise(occ, _senc(k2, k))), att(s))

    assert strengthen(clause, precise_axiom(PRECISE), recorder) is None
    (removed,) = recorder.named("clause removed by assertion")
    assert removed["assertion"] == "precise"
    assert removed["clause"] == "event(Precise(occ,senc(k1,k))) && event(Precise(occ,senc(k2,k))) => att(s)"


def test_strengthen_applies_unifier_of_equality() -> None:
    recorder = _Recorder()
    clause = Clause((_precise(occ, x), _precise(occ, _senc(y, k))), att(x))

    strengthened = strengthen(clause, precise_axiom(PRECISE), recorder)

    assert strengthened is not None
    assert strengthened.conclusion == att(_senc(y, k))
    assert strengthened.provenance.kind is ProvenanceKind.STRENGTHENED
    assert strengthened.provenance.assertion == "precise"
    assert recorder.named("clause strengthened")


def test_strengthen_adds_fact_conclusions_once() -> None:
    assertion = Assertion("axiom1", AssertionKind.AXIOM, (att(x),), (Fact(SEEN, (x,)),))
    clause = Clause((att(m),), att(App(F, (m,))))

    strengthened = strengthen(clause, assertion)

    assert strengthened is not None
    assert strengthened.hypotheses == (att(m), Fact(SEEN, (m,)), Fact(SEEN, (App(F, (m,)),)))
    assert strengthen(strengthened, assertion) == strengthened


def test_inductive_lemma_ignores_the_conclusion() -> None:
    lemma = Assertion("inductive-lemma1", AssertionKind.INDUCTIVE_LEMMA, (att(x),), (Fact(SEEN, (x,)),))
    clause = Clause((att(m),), att(App(F, (m,))))

    strengthened = strengthen(clause, lemma)

    assert strengthened is not None
    assert strengthened.hypotheses == (att(m), Fact(SEEN, (m,)))


def test_strengthen_ignores_hypotheses_added_by_assertions() -> None:
    assertion = Assertion("axiom1", AssertionKind.AXIOM, (Fact(SEEN, (x,)),), (Fact(SEEN, (App(F, (x,)),)),))
    clause = Clause(
        (Fact(SEEN, (m,)),),
        att(m),
        template=Step(0, ((m, m),), (Leaf(0),)),
    )

    strengthened = strengthen(clause, assertion)

    assert strengthened is not None
    assert strengthened.hypotheses == (Fact(SEEN, (m,)), Fact(SEEN, (App(F, (m,)),)))


def test_simplifier_decomposes_and_drops_tautologies() -> None:
    simplify = Simplifier({})

    assert simplify(Clause((att(a),), att(App(PAIR, (a, b))))) == [Clause((att(a),), att(b))]
    assert simplify(Clause((att(x), att(x)), att(App(F, (x,))))) == [Clause((att(x),), att(App(F, (x,))))]


def test_simplifier_removes_unsatisfiable_constraints() -> None:
    recorder = _Recorder()
    simplify = Simplifier({}, trace=recorder)

    clause = Clause((att(a),), att(App(F, (a,))), ConstraintSet.of([Diseq(frozenset(), a, a)]))

    assert simplify(clause) == []
    assert recorder.named("clause removed by constraints")


def test_simplifier_strengthens_with_assertions() -> None:
    recorder = _Recorder()
    simplify = Simplifier({}, (precise_axiom(PRECISE),), recorder)

    removed = Clause((_precise(occ, _senc(k1, k)), _precise(occ, _senc(k2, k))), att(s))
    kept = Clause((_precise(occ, _senc(k1, k)),), att(k1))

    assert simplify(removed) == []
    assert simplify(kept) == [kept]
    assert len(recorder.named("clause removed by assertion")) == 1


def test_simplifier_leaves_exempt_clauses_unstrengthened() -> None:
    assertion = Assertion("axiom1", AssertionKind.AXIOM, (att(x),), (Fact(SEEN, (x,)),))
    generator = Clause((att(x), att(y)), att(App(PAIR, (x, y))), exempt=True)

    assert Simplifier({}, (assertion,))(generator) == [generator]
