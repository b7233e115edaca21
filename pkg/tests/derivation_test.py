from dataclasses import replace

import pytest

from hornet.engine.derivation import (
    Derivation,
    SearchNode,
    UnfoldError,
    check_derivation,
    format_dot,
    format_text,
    to_graph,
    unfold,
)
from hornet.engine.query import decide
from hornet.engine.saturate import SaturationResult
from hornet.logic.clauses import Clause, att
from hornet.logic.constraints import ConstraintSet, Diseq
from hornet.logic.terms import App, Var
from tests.corpus_helpers import saturate_corpus
from tests.oracles import A, B, F, const

x = Var("x", 1)
a, b = const(A), const(B)
fa = App(F, (a,))

INITIAL = [
    Clause((), att(a), label="start"),
    Clause((att(x),), att(App(F, (x,))), label="wrap"),
]
LEAF = Derivation(att(a), 0, (), label="start")
ROOT = Derivation(fa, 1, ((x, a),), (LEAF,), label="wrap")


def test_derivation_shape() -> None:
    assert ROOT.depth == 2
    assert list(ROOT.nodes()) == [ROOT, LEAF]
    assert ROOT.uses(0) == 1
    assert ROOT.uses(1) == 1
    assert ROOT.all_assumptions() == []


def test_check_derivation_accepts_valid_tree() -> None:
    assert check_derivation(ROOT, INITIAL)
    assert check_derivation(ROOT, INITIAL, att(App(F, (x,))))


def test_check_derivation_rejects_wrong_goal() -> None:
    assert not check_derivation(ROOT, INITIAL, att(b))


@pytest.mark.parametrize(
    "tampered",
    [
        replace(ROOT, fact=att(App(F, (b,)))),
        replace(ROOT, bindings=((x, b),)),
        replace(ROOT, bindings=()),
        replace(ROOT, children=()),
        replace(ROOT, children=(replace(LEAF, fact=att(b)),)),
        replace(ROOT, clause=7),
        replace(ROOT, assumptions=(att(a),)),
    ],
)
def test_check_derivation_rejects_tampering(tampered: Derivation) -> None:
    assert not check_derivation(tampered, INITIAL)


def test_check_derivation_rejects_unsatisfiable_constraints() -> None:
    guarded = [INITIAL[0], replace(INITIAL[1], constraints=ConstraintSet.of([Diseq(frozenset(), x, a)]))]

    assert not check_derivation(ROOT, guarded)


def test_unfold_follows_justifications() -> None:
    result = SaturationResult.from_clauses(INITIAL)
    leaf = SearchNode(0, result.solved[0], ())
    node = SearchNode(1, result.solved[1].apply({x: a}), (leaf,))

    derivation = unfold(node, result.initial.clauses)

    assert derivation.fact == fa
    assert derivation.clause == 1
    assert derivation.children[0].fact == att(a)
    assert check_derivation(derivation, result.initial.clauses)


def test_unfold_without_justification_fails() -> None:
    with pytest.raises(UnfoldError):
        unfold(SearchNode(0, INITIAL[0], ()), INITIAL)


def test_format_text() -> None:
    assert format_text(ROOT) == "att(f(a))  <- #1 wrap\n    att(a)  <- #0 start"


def test_format_text_lists_assumptions() -> None:
    spec, result = saturate_corpus("handshake.hc")
    verdict = decide(spec.queries[1], result)
    assert verdict.derivation is not None

    text = format_text(verdict.derivation)

    assert text.splitlines()[0].startswith("end(")
    assert "assumes event(begin(" in text
    assert "clause at line 18" in text


def test_example1_derivation_mentions_b_clause() -> None:
    spec, result = saturate_corpus("example1.hc")
    verdict = decide(spec.queries[0], result)
    assert verdict.derivation is not None

    text = format_text(verdict.derivation)

    assert text.splitlines()[0] == f"att(s)  <- #{verdict.derivation.clause} {verdict.derivation.label}"
    assert text.count("clause at line 18") >= 2


def test_to_graph_is_a_tree() -> None:
    spec, result = saturate_corpus("handshake.hc")
    verdict = decide(spec.queries[1], result)
    assert verdict.derivation is not None
    derivation = verdict.derivation

    graph = to_graph(derivation)

    applications = len(list(derivation.nodes()))
    assumptions = sum(len(node.assumptions) for node in derivation.nodes())
    assert graph.number_of_nodes() == applications + assumptions
    assert graph.number_of_edges() == graph.number_of_nodes() - 1


def test_format_dot() -> None:
    dot = format_dot(ROOT, title="query att(f(a))")

    first = dot.splitlines()[0]
    assert first.startswith("digraph")
    assert "derivation" in first
    assert "#1 wrap" in dot
    assert "{x=a}" in dot
    assert "shape=box" in dot
    assert "query att(f(a))" in dot
