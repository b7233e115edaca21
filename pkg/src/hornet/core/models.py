"""Core run models for hornet.

A `RunConfig` describes one verification run; a `RunReport` is what comes
back: one `QueryOutcome` per query in input order plus the saturation
counters.
"""

from pathlib import Path
from typing import Literal, Self

from pydantic import BaseModel, Field, computed_field, field_validator

from hornet.config import Config, DerivationFormat
from hornet.core.errors import ExitCode
from hornet.engine.query import VerdictKind


class RunConfig(BaseModel):
    """Settings for one `verify` run.

    Attributes:
        input_path: Specification file to verify
        max_clauses: Upper bound on clauses stored during saturation
        max_depth: Upper bound on the term depth of stored clauses
        derivation_depth: Iterative-deepening bound of the backward search
        derivation_format: How derivations are emitted (text, dot or none)
        use_index: Whether saturation uses the feature and prefix indexes
        stats: Whether counters are printed after the verdicts
        verbose: Whether saturation events are traced to stderr
    """

    input_path: Path = Field(description="Specification file to verify")
    max_clauses: int = Field(gt=0, description="Upper bound on stored clauses")
    max_depth: int = Field(gt=0, description="Upper bound on term depth of stored clauses")
    derivation_depth: int = Field(gt=0, description="Backward search depth limit")
    derivation_format: DerivationFormat = Field(default="text", description="Derivation output format")
    use_index: bool = Field(default=True, description="Use clause indexes during saturation")
    stats: bool = Field(default=False, description="Print saturation counters")
    verbose: bool = Field(default=False, description="Trace saturation events to stderr")
    feature_top_k: int = Field(default=16, ge=0, description="Symbols tracked individually by the feature index")

    @field_validator("derivation_format", mode="before")
    @classmethod
    def normalize_format(cls, value: object) -> object:
        if isinstance(value, str):
            return value.lower()
        return value

    @classmethod
    def from_config(
        cls,
        config: Config,
        input_path: Path,
        *,
        max_clauses: int | None = None,
        max_depth: int | None = None,
        derivation_depth: int | None = None,
        derivation_format: str | None = None,
        no_index: bool = False,
        stats: bool = False,
        verbose: bool = False,
    ) -> Self:
        """Layer command-line flags over the loaded configuration."""
        return cls.model_validate(
            {
                "input_path": input_path,
                "max_clauses": max_clauses if max_clauses is not None else config.saturation.max_clauses,
                "max_depth": max_depth if max_depth is not None else config.saturation.max_term_depth,
                "derivation_depth": (
                    derivation_depth if derivation_depth is not None else config.query.depth_limit
                ),
                "derivation_format": derivation_format or config.output.derivation_format,
                "use_index": config.saturation.use_index and not no_index,
                "stats": stats or config.output.stats,
                "verbose": verbose,
                "feature_top_k": config.saturation.feature_top_k,
            }
        )

    @property
    def dot_path(self) -> Path:
        """Sibling file that receives DOT derivations."""
        return self.input_path.with_name(f"{self.input_path.name}.deriv.dot")


class QueryOutcome(BaseModel):
    """The verdict for one query or lemma, rendered for output."""

    query: str = Field(description="Query or lemma as written in the specification")
    subject: Literal["query", "lemma"] = Field(default="query", description="Whether a query or a lemma was checked")
    verdict: VerdictKind = Field(description="PROVED, DERIVABLE or INCONCLUSIVE")
    reason: str | None = Field(default=None, description="Why the verdict is not PROVED")
    depth: int | None = Field(default=None, description="Search depth of the first witness")
    clause_id: int | None = Field(default=None, description="Solved clause at the root of the witness")
    derivation: str | None = Field(default=None, description="Indented derivation tree over the initial clauses")
    dot: str | None = Field(default=None, description="DOT rendering of the derivation")
    certified: bool | None = Field(default=None, description="Whether the derivation replays against the initial clauses")

    @property
    def line(self) -> str:
        return f"{self.subject} {self.query}: {self.verdict}"


class RunStats(BaseModel):
    """Saturation counters reported with `--stats`."""

    clauses_generated: int = 0
    clauses_stored: int = 0
    resolutions: int = 0
    subsumption_checks: int = 0
    forward_subsumed: int = 0
    backward_subsumed: int = 0
    index_candidates: int = 0
    solved: int = 0
    unsolved: int = 0
    initial_clauses: int = 0

    def lines(self) -> list[str]:
        """`key=value` lines, sorted by key."""
        return [f"{key}={value}" for key, value in sorted(self.model_dump().items())]


class RunReport(BaseModel):
    """Outcome of one run: verdicts in input order plus counters."""

    source: str = Field(description="Specification file that was verified")
    outcomes: list[QueryOutcome] = Field(default_factory=list)
    stats: RunStats = Field(default_factory=RunStats)
    complete: bool = Field(default=True, description="Whether saturation reached a fixpoint")
    limit: str | None = Field(default=None, description="Guard that stopped saturation early")
    seconds: float = Field(default=0.0, ge=0, description="Wall time of the whole run")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def exit_code(self) -> int:
        verdicts = {outcome.verdict for outcome in self.outcomes}
        if VerdictKind.DERIVABLE in verdicts:
            return ExitCode.DERIVABLE
        if VerdictKind.INCONCLUSIVE in verdicts:
            return ExitCode.INCONCLUSIVE
        return ExitCode.PROVED
