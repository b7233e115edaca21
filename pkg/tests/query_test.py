import pytest

from hornet.config import SaturationConfig
from hornet.core.errors import SaturationLimitError
from hornet.engine.derivation import check_derivation
from hornet.engine.query import (
    PROVED,
    BackwardSearch,
    VerdictKind,
    check_lemma,
    decide,
    derivable,
    lemma_query,
    violates,
)
from hornet.engine.saturate import saturate
from hornet.frontend.generate import desugar_precise, initial_clauses
from hornet.frontend.parser import parse_spec
from hornet.frontend.spec import Correspondence, Secrecy, Specification
from hornet.logic.clauses import Clause, Fact, att
from hornet.logic.terms import App, Var
from tests.corpus_helpers import load_corpus, saturate_corpus
from tests.oracles import forward_chain

SIGNED = (
    "fun sign/2.\n"
    "name k private.\n"
    "name a.\n"
    "pred begin/1 blocking.\n"
    "clause event(begin(m)) && att(m) => att(sign(m, k)).\n"
)


def test_example1_secrecy_is_derivable() -> None:
    spec, result = saturate_corpus("example1.hc")
    (query,) = spec.queries

    verdict = decide(query, result)

    assert verdict.kind is VerdictKind.DERIVABLE
    assert verdict.derivation is not None
    assert verdict.clause_id is not None
    assert check_derivation(verdict.derivation, result.initial.clauses, att(_name(spec, "s")))
    # B's clause is the fourth protocol clause and must run once per key
    assert verdict.derivation.uses(result.initial.adversary_count + 3) >= 2


def test_precise_example_secrecy_is_proved() -> None:
    spec, result = saturate_corpus("example1_precise.hc")
    (query,) = spec.queries

    verdict = decide(query, result)

    assert verdict == PROVED
    assert verdict.proved
    assert verdict.derivation is None


def test_denning_sacco_secret_leaks() -> None:
    spec, result = saturate_corpus("denning_sacco.hc")
    (query,) = spec.queries
    assert isinstance(query, Secrecy)

    verdict = decide(query, result)

    assert verdict.kind is VerdictKind.DERIVABLE
    assert verdict.derivation is not None
    assert check_derivation(verdict.derivation, result.initial.clauses, query.goal)


@pytest.mark.slow
def test_denning_sacco_leak_agrees_with_forward_chaining() -> None:
    spec, result = saturate_corpus("denning_sacco.hc")

    facts = forward_chain(result.initial.clauses, depth_bound=3, rounds=10)

    assert att(_name(spec, "s")) in facts


def test_handshake_correspondences() -> None:
    spec, result = saturate_corpus("handshake.hc")
    authentic, impossible = spec.queries

    assert decide(authentic, result) == PROVED

    verdict = decide(impossible, result)
    assert verdict.kind is VerdictKind.DERIVABLE
    assert verdict.reason is not None
    assert verdict.reason.startswith(f"solved clause #{verdict.clause_id}")
    assert verdict.derivation is not None
    assert verdict.derivation.fact.predicate.ident == "end"
    assert [fact.predicate.ident for fact in verdict.derivation.all_assumptions()] == ["begin"]
    assert check_derivation(verdict.derivation, result.initial.clauses)


def test_partial_saturation_is_inconclusive() -> None:
    spec = load_corpus("example1.hc")
    with pytest.raises(SaturationLimitError) as exc_info:
        saturate(initial_clauses(spec), config=SaturationConfig(max_clauses=5))

    verdict = decide(spec.queries[0], exc_info.value.partial)

    assert verdict.kind is VerdictKind.INCONCLUSIVE
    assert verdict.reason == "saturation limit exceeded (max-clauses)"


def test_depth_limit_is_inconclusive() -> None:
    spec, result = saturate_corpus("example1.hc")
    pair = spec.symbol("pair")
    assert pair is not None
    s = _name(spec, "s")

    shallow = derivable(att(App(pair, (s, s))), result, depth_limit=1)
    deep = derivable(att(App(pair, (s, s))), result)

    assert shallow.kind is VerdictKind.INCONCLUSIVE
    assert shallow.reason == "derivation depth limit 1 reached"
    assert deep.kind is VerdictKind.DERIVABLE


def test_backward_search_finds_public_names_at_depth_one() -> None:
    spec, result = saturate_corpus("example1.hc")

    witness, depth, exhausted = BackwardSearch(result.solved).search(att(_name(spec, "b0")))

    assert witness is not None
    assert depth == 1
    assert not exhausted
    assert witness.clause.conclusion == att(_name(spec, "b0"))


def test_backward_search_reports_exhaustion() -> None:
    spec, result = saturate_corpus("example1_precise.hc")

    witness, depth, exhausted = BackwardSearch(result.solved).search(att(_name(spec, "k")))

    assert witness is None
    assert depth is None
    assert exhausted


def test_violates_needs_matching_blocking_hypothesis() -> None:
    spec = load_corpus("handshake.hc")
    authentic, impossible = spec.queries
    assert isinstance(authentic, Correspondence)
    assert isinstance(impossible, Correspondence)
    begin, end = spec.predicate("begin"), spec.predicate("end")
    assert begin is not None
    assert end is not None
    m = Var("m", 101)
    guarded = Clause((Fact(begin, (m,)), att(m)), Fact(end, (m,)))
    unguarded = Clause((att(m),), Fact(end, (m,)))

    assert violates(authentic, guarded) is None
    assert violates(authentic, unguarded) == Fact(end, (m,))
    assert violates(impossible, guarded) == Fact(end, (m,))
    assert violates(authentic, Clause((), att(m))) is None


def test_violates_keeps_clause_variables_fixed() -> None:
    spec = load_corpus("handshake.hc")
    authentic = spec.queries[0]
    assert isinstance(authentic, Correspondence)
    begin, end = spec.predicate("begin"), spec.predicate("end")
    assert begin is not None
    assert end is not None
    w, z = Var("w", 102), Var("z", 103)
    unrelated = Clause((Fact(begin, (w,)), att(z)), Fact(end, (z,)))

    assert violates(authentic, unrelated) == Fact(end, (z,))


def test_unrelated_begin_event_does_not_prove_correspondence() -> None:
    spec = desugar_precise(
        parse_spec(
            "name a.\n"
            "pred begin/1 blocking.\n"
            "pred end/1.\n"
            "clause event(begin(w)) && att(z) => end(z).\n"
            "query end(y) ==> event(begin(y)).\n"
        )
    )
    result = saturate(initial_clauses(spec), spec.assertions)

    verdict = decide(spec.queries[0], result)

    assert verdict.kind is VerdictKind.DERIVABLE
    assert verdict.derivation is not None
    assert check_derivation(verdict.derivation, result.initial.clauses)


def test_lemma_equalities_must_hold_on_every_concluding_clause() -> None:
    spec = desugar_precise(
        parse_spec("name a.\nname s private.\nclause true => att(s).\nlemma att(x) ==> x = a.\n")
    )
    result = saturate(initial_clauses(spec), [assertion for assertion in spec.assertions if not assertion.is_lemma])
    (lemma,) = [assertion for assertion in spec.assertions if assertion.is_lemma]

    verdict = check_lemma(lemma, result)

    assert verdict.kind is VerdictKind.DERIVABLE
    assert verdict.derivation is not None
    assert verdict.derivation.fact.is_attacker
    assert check_derivation(verdict.derivation, result.initial.clauses)


def test_lemma_holds_when_violating_clauses_cannot_fire() -> None:
    spec = desugar_precise(parse_spec(SIGNED + "lemma att(sign(x, k)) ==> event(begin(x)).\n"))
    result = saturate(initial_clauses(spec), [assertion for assertion in spec.assertions if not assertion.is_lemma])
    (lemma,) = [assertion for assertion in spec.assertions if assertion.is_lemma]

    # the adversary's own sign clause needs att(k), which never holds
    assert check_lemma(lemma, result) == PROVED


def test_lemma_over_blocking_premises_is_inconclusive() -> None:
    spec = parse_spec("pred begin/1 blocking.\nlemma event(begin(x)) && event(begin(y)) ==> x = y.\n")
    (lemma,) = spec.assertions
    _, result = saturate_corpus("handshake.hc")

    assert lemma_query(lemma) is None
    verdict = check_lemma(lemma, result)
    assert verdict.kind is VerdictKind.INCONCLUSIVE
    assert verdict.reason == "lemma needs exactly one non-blocking premise to be proved"


def _name(spec: Specification, ident: str) -> App:
    symbol = spec.symbol(ident)
    assert symbol is not None
    return App(symbol, ())
