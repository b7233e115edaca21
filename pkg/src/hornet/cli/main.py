"""Root cyclopts app: global flags, logging and telemetry setup, error-to-exit-code mapping."""

from __future__ import annotations

import os
import uuid
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import cached_property
from importlib.metadata import version as get_version
from typing import Annotated, NoReturn

import cyclopts
from cyclopts import App, Parameter, ResultAction
from rich.console import Console
from rich.traceback import install
from structlog.contextvars import bind_contextvars, clear_contextvars

from hornet.config import Config, get_config
from hornet.core.errors import ExitCode, HornetError
from hornet.core.logging import configure_logging, get_logger, is_ci_environment
from hornet.core.telemetry import (
    TelemetrySession,
    bind_trace_contextvars,
    configure_telemetry,
    force_flush_telemetry,
    get_current_trace_id,
    get_tracer,
    set_span_attributes,
    telemetry_is_active,
)
from hornet.rich_utils import err_console, output_error

if not is_ci_environment():
    install(suppress=[cyclopts])

_TRACER = get_tracer(__name__)
_VERSION = get_version("hornet")


@dataclass
class HornetContext:
    """Per-invocation state handed to commands that ask for it."""

    debug: bool = False
    trace_id: str = field(default_factory=lambda: uuid.uuid4().hex)
    span_trace_id: str | None = None

    @cached_property
    def config(self) -> Config:
        base_config = get_config()
        return base_config.model_copy(update={"debug": self.debug or base_config.debug})


ContextArg = Annotated[HornetContext, Parameter(parse=False)]
MetaTokens = Annotated[str, Parameter(show=False, allow_leading_hyphen=True)]  # pyright: ignore[reportCallIssue]


def print_error_and_exit(message: str, *, error: Exception | None = None) -> NoReturn:
    err_console.print(f"[bold red]Error:[/] {message}", highlight=False)
    raise SystemExit(ExitCode.INPUT_ERROR) from error


def exit_with_error(error: HornetError) -> NoReturn:
    """Print a hornet error with its diagnostics and exit with the input-error code."""
    output_error(error)
    raise SystemExit(ExitCode.INPUT_ERROR) from error


def _resolve_trace_endpoint(config: Config) -> str | None:
    for candidate in (
        config.telemetry.trace_endpoint,
        os.getenv("OTEL_EXPORTER_OTLP_TRACES_ENDPOINT"),
        os.getenv("OTEL_EXPORTER_OTLP_ENDPOINT"),
    ):
        if candidate:
            return candidate
    return None


def _print_exit_summary(
    ctx: HornetContext,
    config: Config,
    telemetry: TelemetrySession,
    otel_trace_id: str | None,
    flush_ok: bool,
) -> None:
    if config.logging.enabled:
        lead = "Logs for this execution have"
    elif telemetry.enabled:
        lead = "Trace for this execution has"
    else:
        return
    line = f"{lead} trace_id {otel_trace_id or ctx.trace_id}"
    if telemetry.enabled:
        destination = _resolve_trace_endpoint(config) or "the configured OTLP endpoint"
        line += f" [dim](Traces {'sent to' if flush_ok else 'queued for'} {destination})[/dim]"
    # stdout carries verdict output only
    err_console.print(line)


@contextmanager
def _command_scope(
    ctx: HornetContext, config: Config, telemetry: TelemetrySession, command_name: str, tokens: list[str]
) -> Iterator[None]:
    """Root span plus trace-id context for one command."""
    if not telemetry.enabled:
        bind_contextvars(trace_id=ctx.trace_id)
        yield
        return
    with _TRACER.start_as_current_span(f"cli.{command_name.removeprefix('_').replace('_', '-')}") as span:
        set_span_attributes(
            span,
            {"hornet.command.name": command_name, "hornet.command.tokens": tokens, "hornet.mode.debug": config.debug},
        )
        bind_trace_contextvars()
        ctx.span_trace_id = get_current_trace_id()
        yield


app = App(
    name="hornet",
    help=(
        "hornet - Horn-clause saturation verifier for security protocols.\n\n"
        "Use `verify FILE` to check the secrecy and correspondence queries of a specification."
    ),
    version=_VERSION,
)
app.register_install_completion_command()  # NOTE: This modifies the user's shell rc file


@app.meta.default
def _launcher(
    *tokens: MetaTokens,
    debug: Annotated[
        bool,
        Parameter(name="--debug", env_var="HORNET_DEBUG", negative="", help="Enable debug logging"),
    ] = False,
) -> object:
    clear_contextvars()
    ctx = HornetContext(debug=debug)
    try:
        config = ctx.config
    except HornetError as error:
        exit_with_error(error)
    token_list = list(tokens)
    telemetry = configure_telemetry(config)
    logger = get_logger(__name__) if configure_logging(config) is not None or telemetry.enabled else None

    try:
        command, bound, ignored = app.parse_args(tokens)
        injected = {name: ctx for name, annotation in ignored.items() if annotation is HornetContext}
        command_name = getattr(command, "__name__", type(command).__name__)
        with _command_scope(ctx, config, telemetry, command_name, token_list):
            if logger is not None:
                logger.info("Running CLI command", command=command_name, tokens=token_list, debug=config.debug)
            return command(*bound.args, **bound.kwargs, **injected)
    except SystemExit:
        raise
    except HornetError as error:
        get_logger(__name__).warning("CLI command rejected input", tokens=token_list, error=error.message)
        exit_with_error(error)
    except Exception:
        get_logger(__name__).exception("CLI command failed", tokens=token_list)
        raise
    finally:
        flush_ok = force_flush_telemetry() if telemetry.enabled or telemetry_is_active() else True
        _print_exit_summary(ctx, config, telemetry, ctx.span_trace_id, flush_ok)
        clear_contextvars()


@app.command(name="version")
def version() -> None:
    """Display the installed hornet version."""
    from hornet.rich_utils import console

    console.print(f"hornet {_VERSION}", highlight=False)


app.command("hornet.cli.verify:verify", name="verify")
app.command("hornet.cli.config:config")


def cli(
    tokens: Iterable[str] | str | None = None,
    *,
    result_action: ResultAction | None = None,
    console: Console | None = None,
    error_console: Console | None = None,
) -> object:
    """Invoke the hornet CLI; keyword options are passed through to cyclopts."""
    return app.meta(tokens, result_action=result_action, console=console, error_console=error_console)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
