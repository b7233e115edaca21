"""The verification pipeline.

This module provides the Verifier, which runs one specification through
parsing, precise desugaring, initial clause generation, lemma checking,
saturation and query answering, with the output handler injected for testability.
"""

import time
from pathlib import Path
from typing import Literal

from hornet.config import Config, SaturationConfig, get_config
from hornet.core.errors import InputFileError, SaturationLimitError
from hornet.core.logging import get_logger
from hornet.core.models import QueryOutcome, RunConfig, RunReport, RunStats
from hornet.core.output import DefaultOutputHandler, OutputHandler
from hornet.core.telemetry import counter_attributes, get_tracer, phase_span, set_span_attributes
from hornet.engine.derivation import check_derivation, format_dot, format_text
from hornet.engine.query import Verdict, VerdictKind, check_lemma, decide
from hornet.engine.saturate import SaturationResult, saturate
from hornet.frontend.generate import InitialClauses, desugar_precise, initial_clauses
from hornet.frontend.parser import parse_spec
from hornet.frontend.spec import Query, Secrecy, Specification
from hornet.logic.clauses import Assertion, Fact

logger = get_logger(__name__)
tracer = get_tracer(__name__)


class Verifier:
    """Runs specifications through the whole pipeline.

    Example:
        >>> verifier = Verifier(output_handler=SilentOutputHandler())
        >>> report = verifier.run(RunConfig.from_config(get_config(), Path("corpus/example1.hc")))
        >>> report.exit_code
        1
    """

    def __init__(self, *, config: Config | None = None, output_handler: OutputHandler | None = None) -> None:
        self.config = config or get_config()
        self.output: OutputHandler = output_handler or DefaultOutputHandler()

    def load(self, path: Path) -> Specification:
        """Read and parse a specification file.

        Raises:
            InputFileError: If the file cannot be read
            SpecificationError: If the text does not parse or validate
        """
        with phase_span(tracer, "parse", {"hornet.input.path": str(path)}) as span:
            try:
                text = path.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                logger.warning("Specification file unreadable", path=str(path), error=str(exc))
                raise InputFileError("Specification file could not be read", path=str(path), cause=exc) from exc
            spec = parse_spec(text, source=str(path))
            set_span_attributes(
                span,
                {
                    "hornet.spec.symbols": len(spec.symbols),
                    "hornet.spec.clauses": len(spec.protocol_clauses),
                    "hornet.spec.queries": len(spec.queries),
                },
            )
            return spec

    def run(self, run_config: RunConfig) -> RunReport:
        """Verify the file named by `run_config` and report every query."""
        started = time.perf_counter()
        spec = self.load(run_config.input_path)
        report = self.verify(spec, run_config)
        report.seconds = time.perf_counter() - started
        if run_config.derivation_format == "dot":
            self._write_dot(report, run_config.dot_path)
        return report

    def verify(self, spec: Specification, run_config: RunConfig) -> RunReport:
        """Verify an already parsed specification.

        Lemmas are checked first, in input order, and only the proved ones
        strengthen the saturation that answers the queries.
        """
        with phase_span(tracer, "generate") as span:
            spec = desugar_precise(spec)
            initial = initial_clauses(spec)
            set_span_attributes(
                span,
                {
                    "hornet.clauses.initial": len(initial),
                    "hornet.clauses.adversary": initial.adversary_count,
                    "hornet.assertions": len(spec.assertions),
                },
            )

        axioms = tuple(assertion for assertion in spec.assertions if not assertion.is_lemma)
        lemma_outcomes, proved, result = self._prove_lemmas(spec, initial, axioms, run_config)
        if result is None:
            result = self._saturate(initial, (*axioms, *proved), run_config)

        report = RunReport(
            source=spec.source or str(run_config.input_path),
            stats=RunStats.model_validate({**result.stats.as_dict(), "initial_clauses": len(initial)}),
            complete=result.complete,
            limit=result.limit,
        )
        for outcome in lemma_outcomes:
            report.outcomes.append(outcome)
            self.output.on_verdict(outcome)
        for query in spec.queries:
            outcome = self._answer(query, result, run_config)
            report.outcomes.append(outcome)
            self.output.on_verdict(outcome)
        if run_config.stats:
            self.output.on_stats(report.stats)
        logger.info(
            "Verification finished",
            source=report.source,
            queries=len(report.outcomes),
            exit_code=report.exit_code,
            complete=report.complete,
        )
        return report

    def _prove_lemmas(
        self,
        spec: Specification,
        initial: InitialClauses,
        axioms: tuple[Assertion, ...],
        run_config: RunConfig,
    ) -> tuple[list[QueryOutcome], list[Assertion], SaturationResult | None]:
        outcomes: list[QueryOutcome] = []
        proved: list[Assertion] = []
        shared: SaturationResult | None = None
        for lemma in spec.assertions:
            if not lemma.is_lemma:
                continue
            if lemma.inductive:
                result = self._saturate(initial, (*axioms, *proved, lemma), run_config)
            else:
                if shared is None:
                    shared = self._saturate(initial, (*axioms, *proved), run_config)
                result = shared
            with phase_span(tracer, "lemma", {"hornet.lemma": str(lemma)}) as span:
                verdict = check_lemma(lemma, result, run_config.derivation_depth)
                outcome = _outcome(str(lemma), verdict, result, run_config, subject="lemma")
                set_span_attributes(span, {"hornet.verdict": str(outcome.verdict)})
            outcomes.append(outcome)
            if verdict.proved:
                proved.append(lemma)
                shared = None
                logger.info("Lemma proved", lemma=lemma.ident)
            else:
                self.output.on_trace("lemma not used", lemma=lemma.ident, verdict=str(verdict.kind))
                logger.warning("Lemma not proved", lemma=lemma.ident, verdict=str(verdict.kind), reason=verdict.reason)
        return outcomes, proved, shared

    def _saturate(
        self, initial: InitialClauses, assertions: tuple[Assertion, ...], run_config: RunConfig
    ) -> SaturationResult:
        saturation = SaturationConfig(
            max_clauses=run_config.max_clauses,
            max_term_depth=run_config.max_depth,
            use_index=run_config.use_index,
            feature_top_k=run_config.feature_top_k,
        )
        with phase_span(tracer, "saturate", {"hornet.saturation.index": run_config.use_index}) as span:
            try:
                result = saturate(initial, assertions, saturation, self.output.on_trace)
            except SaturationLimitError as exc:
                result = exc.partial
            set_span_attributes(
                span,
                {
                    "hornet.saturation.complete": result.complete,
                    "hornet.saturation.limit": result.limit,
                    **counter_attributes("saturation", result.stats.as_dict()),
                },
            )
            return result

    def _answer(self, query: Query, result: SaturationResult, run_config: RunConfig) -> QueryOutcome:
        with phase_span(tracer, "query") as span:
            verdict = decide(query, result, run_config.derivation_depth)
            goal = query.goal if isinstance(query, Secrecy) else None
            outcome = _outcome(str(query), verdict, result, run_config, goal=goal)
            set_span_attributes(
                span,
                {
                    "hornet.query": outcome.query,
                    "hornet.verdict": str(outcome.verdict),
                    "hornet.derivation.depth": outcome.depth,
                },
            )
            logger.info("Query answered", query=outcome.query, verdict=str(outcome.verdict), reason=outcome.reason)
            return outcome

    def _write_dot(self, report: RunReport, path: Path) -> None:
        graphs = [outcome.dot for outcome in report.outcomes if outcome.dot]
        if not graphs:
            return
        try:
            path.write_text("\n".join(graphs), encoding="utf-8")
        except OSError as exc:
            raise InputFileError("Derivation file could not be written", path=str(path), cause=exc) from exc
        logger.info("Derivations written", path=str(path), graphs=len(graphs))


def _outcome(
    label: str,
    verdict: Verdict,
    result: SaturationResult,
    run_config: RunConfig,
    *,
    goal: Fact | None = None,
    subject: Literal["query", "lemma"] = "query",
) -> QueryOutcome:
    outcome = QueryOutcome(
        query=label,
        subject=subject,
        verdict=verdict.kind,
        reason=verdict.reason,
        depth=verdict.depth,
        clause_id=verdict.clause_id,
    )
    if verdict.kind is not VerdictKind.DERIVABLE or verdict.derivation is None:
        return outcome
    outcome.certified = check_derivation(verdict.derivation, result.initial.clauses, goal)
    if not outcome.certified:
        logger.error("Derivation failed certificate check", query=outcome.query, clause_id=verdict.clause_id)
    match run_config.derivation_format:
        case "text":
            outcome.derivation = format_text(verdict.derivation)
        case "dot":
            outcome.dot = format_dot(verdict.derivation, title=f"{subject} {label}")
        case "none":
            pass
    return outcome
