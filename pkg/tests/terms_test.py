import itertools
import random

import pytest

from hornet.logic.terms import (
    App,
    Nat,
    Symbol,
    SymbolKind,
    Term,
    Var,
    apply,
    canonical_renaming,
    compose,
    depth,
    fresh_var,
    match,
    renaming,
    size,
    symbols,
    unify,
    unify_pairs,
    variables,
)
from tests.oracles import A, B, F, G, const, ground_terms, random_term

SENC = Symbol("senc", 2, SymbolKind.CONSTRUCTOR)
PAIR = Symbol("pair", 2, SymbolKind.CONSTRUCTOR)

x, y, z = Var("x", 1), Var("y", 2), Var("z", 3)
a, b = const(A), const(B)


def _random_pair(rng: random.Random, pool: list[Term]) -> tuple[Term, Term]:
    return random_term(rng, pool, (F, G), 3), random_term(rng, pool, (F, G), 3)


def test_unify_binds_variable_to_term() -> None:
    assert unify(x, App(F, (a,))) == {x: App(F, (a,))}


def test_unify_decomposes_constructor_arguments() -> None:
    m, k = Var("m", 10), Var("k", 11)
    s, k1, k2 = (const(Symbol(ident, 0, SymbolKind.NAME, private=True)) for ident in ("s", "k1", "k2"))
    target = App(SENC, (s, App(PAIR, (k1, k2))))

    sigma = unify(App(SENC, (m, k)), target)

    assert sigma == {m: s, k: App(PAIR, (k1, k2))}


def test_unify_fails_occur_check() -> None:
    assert unify(x, App(F, (x,))) is None


def test_unify_fails_on_symbol_clash() -> None:
    assert unify(App(F, (x,)), App(G, (y, y))) is None


def test_unify_natural_literals() -> None:
    assert unify(Nat(3), Nat(3)) == {}
    assert unify(Nat(3), Nat(4)) is None
    assert unify(x, Nat(4)) == {x: Nat(4)}


def test_unify_prefers_binding_the_preferred_variable() -> None:
    sigma = unify_pairs([(x, y)], prefer=frozenset({y}))

    assert sigma == {y: x}


def test_unify_extends_base_substitution() -> None:
    sigma = unify(App(G, (x, y)), App(G, (a, b)), base={z: a})

    assert sigma == {z: a, x: a, y: b}


def test_match_is_one_sided() -> None:
    assert match(App(F, (x,)), App(F, (a,))) == {x: a}
    assert match(App(F, (a,)), App(F, (x,))) is None


def test_match_binds_nested_term() -> None:
    k = const(Symbol("k", 0, SymbolKind.NAME, private=True))
    target = App(SENC, (App(SENC, (a, b)), k))

    assert match(App(SENC, (y, k)), target) == {y: App(SENC, (a, b))}


def test_match_respects_repeated_variables() -> None:
    assert match(App(G, (x, x)), App(G, (a, b))) is None
    assert match(App(G, (x, x)), App(G, (a, a))) == {x: a}


def test_term_measures() -> None:
    term = App(G, (App(F, (a,)), x))

    assert depth(a) == 1
    assert depth(term) == 3
    assert size(term) == 4
    assert list(symbols(term)) == ["g", "f", "a"]
    assert list(variables(term)) == [x]
    assert str(term) == "g(f(a),x)"


def test_fresh_variables_are_distinct() -> None:
    first, second = fresh_var("x"), fresh_var("x")

    assert first != second
    assert str(first) == str(second) == "x"


def test_renaming_and_canonical_renaming() -> None:
    fresh = renaming([x, y])
    assert set(fresh) == {x, y}
    assert all(image not in {x, y} for image in fresh.values())

    canonical = canonical_renaming([y, x, y])
    assert [str(canonical[y]), str(canonical[x])] == ["v0", "v1"]
    assert canonical == canonical_renaming([y, x])


def test_compose_applies_first_then_second() -> None:
    first = {x: App(F, (y,))}
    second = {y: a, z: b}
    term = App(G, (x, z))

    assert apply(compose(first, second), term) == apply(second, apply(first, term))


@pytest.mark.slow
def test_unifier_soundness_property() -> None:
    rng = random.Random(20_240_501)
    pool: list[Term] = [x, y, z, a, b]
    successes = 0
    for _ in range(10_000):
        left, right = _random_pair(rng, pool)
        sigma = unify(left, right)
        if sigma is None:
            continue
        successes += 1
        assert apply(sigma, left) == apply(sigma, right)
        assert apply(sigma, apply(sigma, left)) == apply(sigma, left)
    assert successes > 100


@pytest.mark.slow
def test_unifier_is_most_general_against_ground_enumeration() -> None:
    rng = random.Random(7)
    universe = ground_terms((A,), (F, G), 3)
    pool: list[Term] = [x, y, a]
    for _ in range(10_000):
        left = random_term(rng, pool, (F, G), 3)
        right = random_term(rng, pool, (F, G), 3)
        sigma = unify(left, right)
        for images in itertools.product(universe, repeat=2):
            theta = {x: images[0], y: images[1]}
            if apply(theta, left) != apply(theta, right):
                continue
            assert sigma is not None
            assert match(apply(sigma, left), apply(theta, left)) is not None


@pytest.mark.slow
def test_match_implies_unify_with_renamed_target() -> None:
    rng = random.Random(11)
    pool: list[Term] = [x, y, a, b]
    for _ in range(10_000):
        pattern, target = _random_pair(rng, pool)
        if match(pattern, target) is None:
            continue
        fresh = apply(renaming(variables(target)), target)
        assert unify(pattern, fresh) is not None
