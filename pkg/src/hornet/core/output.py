"""Output handling for hornet runs.

The Verifier reports saturation events, verdicts and counters through an
`OutputHandler`, so the same run can print to the console, be collected in
tests or be discarded.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:
    from hornet.core.models import QueryOutcome, RunStats

TraceFields = dict[str, object]


class OutputHandler(Protocol):
    """Receiver of everything a verification run wants to show."""

    def on_trace(self, event: str, **fields: object) -> None:
        """Handle one saturation event.

        Args:
            event: What happened, e.g. "clause added" or "clause removed by assertion"
            fields: Event details (clause text, ids, assertion name)
        """
        ...

    def on_verdict(self, outcome: QueryOutcome) -> None:
        """Handle the verdict of one query, in input order."""
        ...

    def on_stats(self, stats: RunStats) -> None:
        """Handle the saturation counters of the run."""
        ...


def format_trace(event: str, fields: TraceFields) -> str:
    """Single-line rendering of a saturation event."""
    details = dict(fields)
    clause = details.pop("clause", None)
    head = event
    if "id" in details:
        head += f" #{details.pop('id')}"
    rest = " ".join(f"{key}={value}" for key, value in details.items())
    parts = [head + (f" ({rest})" if rest else "")]
    if clause is not None:
        parts.append(str(clause))
    return ": ".join(parts)


class DefaultOutputHandler:
    """Prints verdicts to stdout and, when verbose, saturation events to stderr."""

    def __init__(self, *, verbose: bool = False, derivation_format: str = "text") -> None:
        # Lazy import to avoid circular dependency
        from hornet.rich_utils import console, err_console

        self._console = console
        self._err_console = err_console
        self.verbose = verbose
        self.derivation_format = derivation_format

    def on_trace(self, event: str, **fields: object) -> None:
        if self.verbose:
            self._err_console.print(format_trace(event, fields), markup=False, highlight=False, style="dim")

    def on_verdict(self, outcome: QueryOutcome) -> None:
        from hornet.rich_utils import output_outcome

        output_outcome(outcome, show_derivation=self.derivation_format == "text", target=self._console)

    def on_stats(self, stats: RunStats) -> None:
        from hornet.rich_utils import output_stats

        output_stats(stats, target=self._console)


class SilentOutputHandler:
    """Output handler that discards all output. Useful for testing."""

    def on_trace(self, event: str, **fields: object) -> None:
        """Discard saturation events."""

    def on_verdict(self, outcome: QueryOutcome) -> None:
        """Discard verdicts."""

    def on_stats(self, stats: RunStats) -> None:
        """Discard statistics."""


class CollectingOutputHandler:
    """Output handler that collects all output for later inspection.

    Useful for testing and programmatic access to a run.
    """

    def __init__(self) -> None:
        self.traces: list[tuple[str, TraceFields]] = []
        self.outcomes: list[QueryOutcome] = []
        self.stats: list[RunStats] = []

    def on_trace(self, event: str, **fields: object) -> None:
        self.traces.append((event, fields))

    def on_verdict(self, outcome: QueryOutcome) -> None:
        self.outcomes.append(outcome)

    def on_stats(self, stats: RunStats) -> None:
        self.stats.append(stats)

    def events(self, event: str) -> list[TraceFields]:
        """Fields of every collected trace named `event`."""
        return [fields for name, fields in self.traces if name == event]

    def clear(self) -> None:
        self.traces.clear()
        self.outcomes.clear()
        self.stats.clear()
