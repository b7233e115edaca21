import random

import pytest

from hornet.logic.constraints import (
    UNSAT,
    ConstraintSet,
    Diseq,
    Geq,
    IsNat,
    NotNat,
    implies,
    simplify,
    simplify_diseqs,
    simplify_nat,
)
from hornet.logic.terms import App, Nat, Var, apply, unify
from tests.oracles import A, B, F, G, const, diseq_groundings, geq_holds, nat_solution, random_diseq, random_nat_set

x, y, z = Var("x", 1), Var("y", 2), Var("z", 3)
u, w = Var("u", 4), Var("w", 5)
a, b = const(A), const(B)


def _diseqs(*diseqs: Diseq) -> ConstraintSet:
    return ConstraintSet.of(diseqs)


def test_diseq_against_unifiable_free_term_is_kept() -> None:
    result = simplify_diseqs(_diseqs(Diseq(frozenset(), x, a)))

    assert isinstance(result, ConstraintSet)
    assert result.diseqs == (Diseq(frozenset(), x, a),)


def test_diseq_between_distinct_constants_is_dropped() -> None:
    result = simplify_diseqs(_diseqs(Diseq(frozenset(), a, b)))

    assert isinstance(result, ConstraintSet)
    assert result.diseqs == ()


def test_diseq_on_identical_ground_terms_is_unsat() -> None:
    assert simplify_diseqs(_diseqs(Diseq(frozenset(), App(F, (a,)), App(F, (a,))))) is UNSAT


def test_diseq_satisfiable_only_through_universals_is_unsat() -> None:
    assert simplify_diseqs(_diseqs(Diseq(frozenset({y}), App(F, (y,)), App(F, (x,))))) is UNSAT
    assert simplify_diseqs(_diseqs(Diseq(frozenset({u}), x, u))) is UNSAT


def test_diseq_binding_free_variable_is_kept() -> None:
    diseq = Diseq(frozenset({u}), App(G, (x, u)), App(G, (a, b)))

    result = simplify_diseqs(_diseqs(diseq))

    assert isinstance(result, ConstraintSet)
    assert len(result.diseqs) == 1


def test_diseq_drops_unused_universals_and_duplicates() -> None:
    first = Diseq(frozenset({u, w}), x, App(F, (u,)))
    renamed = Diseq(frozenset({w}), x, App(F, (w,)))

    result = simplify_diseqs(_diseqs(first, renamed))

    assert isinstance(result, ConstraintSet)
    assert result.diseqs == (Diseq(frozenset({u}), x, App(F, (u,))),)


def test_diseq_rendering_and_instantiation() -> None:
    diseq = Diseq(frozenset({u}), x, App(F, (u,)))

    assert str(diseq) == "forall u. x <> f(u)"
    assert diseq.apply({x: a, u: b}) == Diseq(frozenset({u}), a, App(F, (u,)))
    assert diseq.free_vars() == {x}


def test_nat_chain_is_tightened() -> None:
    cs = ConstraintSet.of([Geq(x, y, 2), Geq(y, z, 1)])

    result = simplify_nat(cs)

    assert isinstance(result, ConstraintSet)
    assert Geq(x, z, 3) in result.geqs
    assert Geq(x, Nat(3)) in result.geqs
    assert {constraint.term for constraint in result.nats} == {x, y, z}


def test_nat_cycle_is_unsat() -> None:
    assert simplify_nat(ConstraintSet.of([Geq(x, y, 1), Geq(y, x)])) is UNSAT


def test_nat_zero_cycle_is_satisfiable() -> None:
    result = simplify_nat(ConstraintSet.of([Geq(x, y), Geq(y, x)]))

    assert isinstance(result, ConstraintSet)
    assert Geq(x, y) in result.geqs
    assert Geq(y, x) in result.geqs


def test_nat_literals() -> None:
    assert simplify_nat(ConstraintSet.of([Geq(Nat(2), Nat(3))])) is UNSAT
    assert simplify_nat(ConstraintSet.of([Geq(Nat(3), x, 4)])) is UNSAT

    result = simplify_nat(ConstraintSet.of([Geq(Nat(5), x, 2)]))
    assert isinstance(result, ConstraintSet)
    assert Geq(Nat(3), x) in result.geqs


def test_nat_rejects_constructor_terms() -> None:
    assert simplify_nat(ConstraintSet.of([IsNat(App(F, (a,)))])) is UNSAT
    assert simplify_nat(ConstraintSet.of([Geq(App(F, (x,)), y)])) is UNSAT


def test_not_nat_conflicts() -> None:
    assert simplify_nat(ConstraintSet.of([IsNat(x), NotNat(x)])) is UNSAT
    assert simplify_nat(ConstraintSet.of([NotNat(Nat(0))])) is UNSAT

    result = simplify_nat(ConstraintSet.of([NotNat(App(F, (a,))), NotNat(y), NotNat(y)]))
    assert isinstance(result, ConstraintSet)
    assert result.not_nats == (NotNat(y),)


def test_geq_rendering() -> None:
    assert str(Geq(x, y)) == "x >= y"
    assert str(Geq(x, y, 2)) == "x >= y + 2"
    assert str(Geq(x, y, -1)) == "x >= y - 1"


def test_simplify_runs_both_simplifiers() -> None:
    assert simplify(ConstraintSet.of([Diseq(frozenset(), a, a), Geq(x, y)])) is UNSAT
    assert simplify(ConstraintSet.of([Diseq(frozenset(), a, b), Geq(x, y, 1), Geq(y, x)])) is UNSAT
    assert simplify(ConstraintSet()) == ConstraintSet()


def test_implies() -> None:
    premises = simplify_nat(ConstraintSet.of([Geq(x, y, 2), Diseq(frozenset({u}), x, App(F, (u,)))]))
    assert isinstance(premises, ConstraintSet)

    assert implies(premises, ConstraintSet())
    assert implies(premises, ConstraintSet.of([Geq(x, y, 1)]))
    assert not implies(premises, ConstraintSet.of([Geq(x, y, 3)]))
    assert implies(premises, ConstraintSet.of([Diseq(frozenset({w}), x, App(F, (w,)))]))
    assert implies(premises, ConstraintSet.of([Diseq(frozenset(), a, b)]))
    assert not implies(premises, ConstraintSet.of([Diseq(frozenset(), y, a)]))
    assert not implies(premises, ConstraintSet.of([Diseq(frozenset(), a, a)]))
    assert not implies(premises, ConstraintSet.of([IsNat(z)]))


@pytest.mark.slow
def test_simplify_nat_agrees_with_exhaustive_search() -> None:
    rng = random.Random(2_024)
    verdicts = {True: 0, False: 0}
    for _ in range(10_000):
        cs = random_nat_set(rng)
        result = simplify_nat(cs)
        solution = nat_solution(cs)
        assert (result is UNSAT) == (solution is None), str(cs)
        verdicts[solution is None] += 1
        if isinstance(result, ConstraintSet) and solution is not None:
            assert all(geq_holds(geq, solution) is True for geq in result.geqs), str(cs)
    assert verdicts[True] > 200
    assert verdicts[False] > 500


@pytest.mark.slow
def test_simplify_diseqs_agrees_with_grounding() -> None:
    rng = random.Random(99)
    outcomes = {"unsat": 0, "dropped": 0, "kept": 0}
    for _ in range(10_000):
        diseq = random_diseq(rng)
        result = simplify_diseqs(_diseqs(diseq))
        # a grounded disequation holds iff its sides no longer unify through the universals
        holds = [
            unify(apply(theta, diseq.lhs), apply(theta, diseq.rhs)) is None for theta in diseq_groundings(diseq)
        ]
        if result is UNSAT:
            outcomes["unsat"] += 1
            assert not any(holds), str(diseq)
        elif not result.diseqs:
            outcomes["dropped"] += 1
            assert all(holds), str(diseq)
        else:
            outcomes["kept"] += 1
            assert any(holds), str(diseq)
    assert all(count > 0 for count in outcomes.values())
