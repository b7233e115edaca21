import pytest

from hornet.frontend.parser import parse_spec
from hornet.frontend.printer import format_assertion, format_protocol_clause, format_query, format_spec
from tests.corpus_helpers import load_corpus


def test_format_protocol_clause_keeps_precise_tags() -> None:
    spec = load_corpus("example1_precise.hc")

    assert format_protocol_clause(spec.protocol_clauses[3]) == "clause att(senc(y,k)) [precise] => att(y)."
    assert format_protocol_clause(spec.protocol_clauses[0]) == "clause true => att(senc(k1,k))."


def test_format_assertion_and_queries() -> None:
    spec = parse_spec(
        "pred begin/1 blocking.\n"
        "pred end/1.\n"
        "lemma inductive att(x) ==> event(begin(x)).\n"
        "query end(x) ==> event(begin(x)).\n"
        "query att(x).\n"
    )

    assert format_assertion(spec.assertions[0]) == "lemma inductive att(x) ==> event(begin(x))."
    assert [format_query(query) for query in spec.queries] == [
        "query end(x) ==> event(begin(x)).",
        "query att(x).",
    ]


def test_format_spec_renders_declarations_in_order() -> None:
    spec = load_corpus("example1.hc")

    assert format_spec(spec).splitlines()[:9] == [
        "fun senc/2.",
        "fun pair/2.",
        "reduc sdec(senc(x,y),y) -> x.",
        "name k private.",
        "name k1 private.",
        "name k2 private.",
        "name s private.",
        "name b0.",
        "clause true => att(senc(k1,k)).",
    ]


@pytest.mark.parametrize("name", ["example1.hc", "example1_precise.hc", "denning_sacco.hc", "handshake.hc"])
def test_round_trip_through_parser(name: str) -> None:
    spec = load_corpus(name)

    printed = format_spec(spec)
    reparsed = parse_spec(printed)

    assert format_spec(reparsed) == printed
    assert reparsed.symbols == spec.symbols
    assert reparsed.predicates == spec.predicates
    assert [pc.precise for pc in reparsed.protocol_clauses] == [pc.precise for pc in spec.protocol_clauses]
    assert [pc.clause.canonical() for pc in reparsed.protocol_clauses] == [
        pc.clause.canonical() for pc in spec.protocol_clauses
    ]
    assert [str(query) for query in reparsed.queries] == [str(query) for query in spec.queries]


def test_round_trip_with_constraints_and_assertions() -> None:
    text = (
        "fun f/1.\n"
        "pred begin/1 blocking.\n"
        "clause att(x) && att(n) && forall u. x <> f(u) && is_nat(n) && not is_nat(x) && n >= 2 + 1 => att(f(x)).\n"
        "axiom event(begin(x)) && event(begin(y)) ==> x = y.\n"
        "restriction event(begin(x)) ==> att(x).\n"
    )
    spec = parse_spec(text)

    printed = format_spec(spec)

    assert format_spec(parse_spec(printed)) == printed
    assert "forall u. x <> f(u)" in printed
    assert "axiom event(begin(x)) && event(begin(y)) ==> x = y." in printed
