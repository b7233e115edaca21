"""Console rendering of verdicts, counters and errors."""

from typing import TYPE_CHECKING

from rich.console import Console

from hornet.core.errors import HornetError, SpecificationError
from hornet.engine.query import FALSE_ATTACK_CAVEAT, VerdictKind

if TYPE_CHECKING:
    from hornet.core.models import QueryOutcome, RunStats

console = Console(soft_wrap=True)
err_console = Console(stderr=True, soft_wrap=True)

VERDICT_STYLES: dict[VerdictKind, str] = {
    VerdictKind.PROVED: "bold green",
    VerdictKind.DERIVABLE: "bold red",
    VerdictKind.INCONCLUSIVE: "bold yellow",
}
_INDENT = "    "


def _plain(target: Console, text: str, style: str | None = None) -> None:
    target.print(text, markup=False, highlight=False, style=style)


def output_outcome(outcome: "QueryOutcome", *, show_derivation: bool = True, target: Console | None = None) -> None:
    """Print one verdict line, plus the caveat, reason or derivation that goes with it.

    The verdict line itself is unstyled text so it stays machine-parseable.
    """
    target = target or console
    _plain(target, outcome.line)
    match outcome.verdict:
        case VerdictKind.DERIVABLE:
            _plain(target, f"  {FALSE_ATTACK_CAVEAT}", style="yellow")
            if show_derivation and outcome.derivation:
                for line in outcome.derivation.splitlines():
                    _plain(target, f"{_INDENT}{line}")
            if outcome.certified is False:
                _plain(target, "  derivation failed certificate check", style=VERDICT_STYLES[outcome.verdict])
        case VerdictKind.INCONCLUSIVE:
            _plain(target, f"  {outcome.reason}", style="dim")
        case VerdictKind.PROVED:
            pass


def output_stats(stats: "RunStats", *, target: Console | None = None) -> None:
    """Print counters as sorted `key=value` lines."""
    target = target or console
    for line in stats.lines():
        _plain(target, line)


def output_error(error: HornetError, *, target: Console | None = None) -> None:
    """Print `Error: ...` and, for specification errors, one line per diagnostic."""
    target = target or err_console
    target.print("[bold red]Error:[/] ", end="")
    _plain(target, error.message)
    if isinstance(error, SpecificationError):
        prefix = f"{error.source}:" if error.source else ""
        for diagnostic in error.diagnostics:
            _plain(target, f"  {prefix}{diagnostic}")
    else:
        details = str(error).splitlines()[1:]
        for line in details:
            _plain(target, f"  {line}", style="dim")
