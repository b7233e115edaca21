from collections.abc import Callable
from pathlib import Path

import pytest
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor
from opentelemetry.sdk.trace.export.in_memory_span_exporter import InMemorySpanExporter

from hornet.config import Config
from hornet.core import verifier as verifier_module
from hornet.core.errors import ExitCode, InputFileError, SpecificationError
from hornet.core.models import RunConfig
from hornet.core.output import CollectingOutputHandler
from hornet.core.verifier import Verifier
from hornet.engine.query import VerdictKind


@pytest.fixture
def output_handler() -> CollectingOutputHandler:
    return CollectingOutputHandler()


@pytest.fixture
def verifier(output_handler: CollectingOutputHandler) -> Verifier:
    return Verifier(config=Config(), output_handler=output_handler)


def _run_config(path: Path, **flags: object) -> RunConfig:
    return RunConfig.from_config(Config(), path, **flags)  # type: ignore[arg-type]


def test_derivable_secret_comes_with_certified_derivation(
    verifier: Verifier, output_handler: CollectingOutputHandler, corpus_dir: Path
) -> None:
    report = verifier.run(_run_config(corpus_dir / "example1.hc"))

    (outcome,) = report.outcomes
    assert outcome.verdict is VerdictKind.DERIVABLE
    assert outcome.certified is True
    assert outcome.derivation is not None
    assert outcome.derivation.startswith("att(s)  <- #")
    assert outcome.dot is None
    assert report.exit_code == ExitCode.DERIVABLE
    assert report.complete
    assert report.seconds > 0
    assert output_handler.outcomes == report.outcomes


def test_precise_run_reports_removed_clause(
    verifier: Verifier, output_handler: CollectingOutputHandler, corpus_dir: Path
) -> None:
    report = verifier.run(_run_config(corpus_dir / "example1_precise.hc"))

    assert report.exit_code == ExitCode.PROVED
    removed = output_handler.events("clause removed by assertion")
    assert removed
    assert all("assertion" in fields and "clause" in fields for fields in removed)
    assert output_handler.events("clause added")


def test_stats_reported_only_when_requested(
    verifier: Verifier, output_handler: CollectingOutputHandler, corpus_dir: Path
) -> None:
    quiet = verifier.run(_run_config(corpus_dir / "example1_precise.hc"))
    assert output_handler.stats == []

    loud = verifier.run(_run_config(corpus_dir / "example1_precise.hc", stats=True))

    assert output_handler.stats == [loud.stats]
    assert loud.stats == quiet.stats
    assert loud.stats.initial_clauses > 0
    assert loud.stats.solved > 0


def test_queries_answered_in_input_order(verifier: Verifier, corpus_dir: Path) -> None:
    report = verifier.run(_run_config(corpus_dir / "handshake.hc", derivation_format="none"))

    assert [outcome.verdict for outcome in report.outcomes] == [VerdictKind.PROVED, VerdictKind.DERIVABLE]
    assert report.outcomes[1].derivation is None
    assert report.outcomes[1].reason is not None
    assert report.outcomes[1].certified is True


def test_saturation_limit_yields_inconclusive_report(verifier: Verifier, corpus_dir: Path) -> None:
    report = verifier.run(_run_config(corpus_dir / "example1.hc", max_clauses=5))

    assert not report.complete
    assert report.limit == "max-clauses"
    assert [outcome.verdict for outcome in report.outcomes] == [VerdictKind.INCONCLUSIVE]
    assert report.exit_code == ExitCode.INCONCLUSIVE


def test_dot_derivations_are_written(verifier: Verifier, corpus_file: Callable[[str], Path]) -> None:
    source = corpus_file("handshake.hc")
    run_config = _run_config(source, derivation_format="dot")

    report = verifier.run(run_config)

    dot = run_config.dot_path.read_text(encoding="utf-8")
    assert dot.count("digraph") == 1
    assert report.outcomes[1].dot is not None
    assert report.outcomes[1].derivation is None


def test_missing_file_raises_input_error(verifier: Verifier, tmp_path: Path) -> None:
    with pytest.raises(InputFileError) as exc_info:
        verifier.load(tmp_path / "absent.hc")

    assert exc_info.value.path == str(tmp_path / "absent.hc")
    assert isinstance(exc_info.value.cause, FileNotFoundError)


def test_invalid_specification_raises(verifier: Verifier, tmp_path: Path) -> None:
    source = tmp_path / "bad.hc"
    source.write_text("fun f/1.\nclause att(x) => att(f(x, x)).\n", encoding="utf-8")

    with pytest.raises(SpecificationError) as exc_info:
        verifier.run(_run_config(source))

    assert exc_info.value.source == str(source)
    assert exc_info.value.diagnostics[0].line == 2


def test_each_phase_runs_in_its_own_span(
    monkeypatch: pytest.MonkeyPatch, verifier: Verifier, corpus_dir: Path
) -> None:
    exporter = InMemorySpanExporter()
    provider = TracerProvider()
    provider.add_span_processor(SimpleSpanProcessor(exporter))
    monkeypatch.setattr(verifier_module, "tracer", provider.get_tracer("hornet.test"))

    verifier.run(_run_config(corpus_dir / "handshake.hc", derivation_format="none"))

    spans = {span.name: span for span in exporter.get_finished_spans()}
    names = [span.name for span in exporter.get_finished_spans()]
    assert names == ["verifier.parse", "verifier.generate", "verifier.saturate", "verifier.query", "verifier.query"]
    saturate_attributes = spans["verifier.saturate"].attributes
    assert saturate_attributes is not None
    assert saturate_attributes["hornet.saturation.complete"] is True
    assert saturate_attributes["hornet.saturation.resolutions"] >= 0
    assert "hornet.saturation.limit" not in saturate_attributes


SIGNED = (
    "fun sign/2.\n"
    "name k private.\n"
    "name a.\n"
    "pred begin/1 blocking.\n"
    "clause event(begin(m)) && att(m) => att(sign(m, k)).\n"
)


def _write_spec(tmp_path: Path, text: str) -> Path:
    source = tmp_path / "lemmas.hc"
    source.write_text(text, encoding="utf-8")
    return source


def test_false_lemma_is_reported_and_not_used(
    verifier: Verifier, output_handler: CollectingOutputHandler, tmp_path: Path
) -> None:
    source = _write_spec(
        tmp_path, "name a.\nname s private.\nclause true => att(s).\nlemma att(x) ==> x = a.\nquery att(s).\n"
    )

    report = verifier.run(_run_config(source, derivation_format="none"))

    lemma, query = report.outcomes
    assert lemma.subject == "lemma"
    assert lemma.line == "lemma att(x) ==> x = a: DERIVABLE"
    assert query.verdict is VerdictKind.DERIVABLE
    assert report.exit_code == ExitCode.DERIVABLE
    assert output_handler.events("lemma not used") == [{"lemma": "lemma1", "verdict": "DERIVABLE"}]
    assert all(fields["assertion"] != "lemma1" for fields in output_handler.events("clause removed by assertion"))


def test_proved_lemma_strengthens_final_saturation(
    verifier: Verifier, output_handler: CollectingOutputHandler, tmp_path: Path
) -> None:
    source = _write_spec(tmp_path, SIGNED + "lemma att(sign(x, k)) ==> event(begin(x)).\nquery att(k).\n")

    report = verifier.run(_run_config(source))

    assert [outcome.line for outcome in report.outcomes] == [
        "lemma att(sign(x,k)) ==> event(begin(x)): PROVED",
        "query att(k): PROVED",
    ]
    assert report.exit_code == ExitCode.PROVED
    assert output_handler.events("lemma not used") == []
    assert any(fields["assertion"] == "lemma1" for fields in output_handler.events("clause strengthened"))


def test_inductive_lemma_is_proved_with_itself_on_hypotheses(verifier: Verifier, tmp_path: Path) -> None:
    source = _write_spec(
        tmp_path,
        SIGNED
        + "clause att(sign(m, k)) => att(sign(m, sign(m, k))).\n"
        + "lemma inductive att(sign(x, k)) ==> event(begin(x)).\n"
        + "query att(k).\n",
    )

    report = verifier.run(_run_config(source))

    lemma, query = report.outcomes
    assert lemma.subject == "lemma"
    assert lemma.verdict is VerdictKind.PROVED
    assert query.verdict is VerdictKind.PROVED


def test_lemma_check_runs_in_its_own_span(
    monkeypatch: pytest.MonkeyPatch, verifier: Verifier, tmp_path: Path
) -> None:
    exporter = InMemorySpanExporter()
    provider = TracerProvider()
    provider.add_span_processor(SimpleSpanProcessor(exporter))
    monkeypatch.setattr(verifier_module, "tracer", provider.get_tracer("hornet.test"))
    source = _write_spec(tmp_path, SIGNED + "lemma att(sign(x, k)) ==> event(begin(x)).\nquery att(k).\n")

    verifier.run(_run_config(source))

    names = [span.name for span in exporter.get_finished_spans()]
    assert names == [
        "verifier.parse",
        "verifier.generate",
        "verifier.saturate",
        "verifier.lemma",
        "verifier.saturate",
        "verifier.query",
    ]
