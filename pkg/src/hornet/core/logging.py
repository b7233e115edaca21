"""Structured logging for hornet runs.

Logging is off unless `logging.enabled` is set. When on, every record of the
`hornet` logger namespace, whether emitted through structlog or the stdlib,
is written as one JSON object per line to a session file under the logs
directory. Clauses, facts and terms passed as event fields are rendered in
their concrete syntax.
"""

from __future__ import annotations

import logging as stdlib_logging
import os
from dataclasses import dataclass
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import TYPE_CHECKING, Self, cast

import structlog
from structlog.types import EventDict, Processor

from hornet.core.telemetry import (
    format_span_id,
    format_trace_flags,
    format_trace_id,
    get_current_span_context,
)
from hornet.logic.clauses import Assertion, Clause, Fact
from hornet.logic.terms import App, Nat, Var

if TYPE_CHECKING:
    from hornet.config import Config

LOG_FILE_BASENAME = "hornet"
_LOG_FILE_GLOB = f"{LOG_FILE_BASENAME}_*.log"
_HANDLER_NAME = "hornet-local-file"
_LOGGER_NAMESPACE = "hornet"
_LOG_LEVELS = {
    "debug": stdlib_logging.DEBUG,
    "info": stdlib_logging.INFO,
    "warning": stdlib_logging.WARNING,
    "error": stdlib_logging.ERROR,
    "critical": stdlib_logging.CRITICAL,
}
_LOGIC_TYPES = (Clause, Fact, Assertion, App, Var, Nat)


class _LoggingState:
    active_log_file: Path | None = None


def is_ci_environment() -> bool:
    """Return whether the current process is running in a CI environment."""
    return os.environ.get("CI", "").lower() in {"1", "true", "yes"}


def _render_logic_values(_: object, __: str, event_dict: EventDict) -> EventDict:
    for key, value in event_dict.items():
        if isinstance(value, _LOGIC_TYPES):
            event_dict[key] = str(value)
        elif isinstance(value, (list, tuple)) and value and all(isinstance(item, _LOGIC_TYPES) for item in value):
            event_dict[key] = [str(item) for item in value]
    return event_dict


def _add_otel_trace_context(_: object, __: str, event_dict: EventDict) -> EventDict:
    span_context = get_current_span_context()
    if span_context is not None:
        event_dict["trace_id"] = format_trace_id(span_context.trace_id)
        event_dict["span_id"] = format_span_id(span_context.span_id)
        event_dict["trace_flags"] = format_trace_flags(span_context.trace_flags)
    return event_dict


def _shared_processors() -> list[Processor]:
    return cast(
        list[Processor],
        [
            structlog.contextvars.merge_contextvars,
            _add_otel_trace_context,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.ExtraAdder(),
            _render_logic_values,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
        ],
    )


def _configure_structlog() -> None:
    structlog.reset_defaults()
    structlog.configure(
        processors=[*_shared_processors(), structlog.stdlib.ProcessorFormatter.wrap_for_formatter],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def session_log_name(timestamp: datetime | None = None) -> str:
    occurred_at = timestamp or datetime.now().astimezone()
    return f"{LOG_FILE_BASENAME}_{occurred_at.strftime('%Y-%m-%dT%H_%M_%S')}.log"


@dataclass(frozen=True, slots=True)
class FileLogSettings:
    """Where session logs go and how large they may grow."""

    logs_dir: Path
    level: int
    max_bytes: int
    backup_count: int

    @classmethod
    def from_config(cls, config: Config) -> Self:
        level = stdlib_logging.DEBUG if config.debug else _LOG_LEVELS[config.logging.level]
        return cls(config.logs_dir, level, config.logging.max_bytes, config.logging.backup_count)

    def session_file(self) -> Path:
        """The file of the current process, reused while the logs directory stays the same."""
        active = _LoggingState.active_log_file
        if active is None or active.parent != self.logs_dir:
            active = self.logs_dir / session_log_name()
            _LoggingState.active_log_file = active
        return active

    def prune(self, active: Path) -> None:
        """Keep the newest `backup_count` sessions plus the active one."""
        retained = self.backup_count + 1
        sessions = sorted({*self.logs_dir.glob(_LOG_FILE_GLOB), active})
        for expired in sessions[:-retained]:
            expired.unlink(missing_ok=True)
            for rotated in self.logs_dir.glob(f"{expired.name}.*"):
                rotated.unlink(missing_ok=True)

    def handler(self, log_file: Path) -> stdlib_logging.Handler:
        handler = RotatingFileHandler(
            log_file, encoding="utf-8", maxBytes=self.max_bytes, backupCount=self.backup_count
        )
        handler.set_name(_HANDLER_NAME)
        handler.setLevel(self.level)
        handler.setFormatter(
            structlog.stdlib.ProcessorFormatter(
                foreign_pre_chain=_shared_processors(),
                processors=[
                    structlog.stdlib.ProcessorFormatter.remove_processors_meta,
                    structlog.processors.JSONRenderer(sort_keys=True),
                ],
            )
        )
        return handler


def _detach_file_handlers(logger: stdlib_logging.Logger) -> None:
    for handler in [h for h in logger.handlers if h.get_name() == _HANDLER_NAME]:
        logger.removeHandler(handler)
        handler.close()


def get_logger(name: str | None = None) -> structlog.stdlib.BoundLogger:
    """Return a structlog logger under the hornet namespace."""
    return cast(structlog.stdlib.BoundLogger, structlog.get_logger(name or _LOGGER_NAMESPACE))


def configure_logging(config: Config) -> Path | None:
    """Attach the session file handler when logging is enabled.

    Returns the active session log file, or None when logging is disabled.
    """
    namespace_logger = stdlib_logging.getLogger(_LOGGER_NAMESPACE)
    _detach_file_handlers(namespace_logger)

    if not config.logging.enabled:
        if is_ci_environment():
            _configure_structlog()
        _LoggingState.active_log_file = None
        namespace_logger.setLevel(stdlib_logging.NOTSET)
        namespace_logger.propagate = True
        return None

    _configure_structlog()
    settings = FileLogSettings.from_config(config)
    log_file = settings.session_file()
    log_file.parent.mkdir(parents=True, exist_ok=True)
    settings.prune(log_file)

    namespace_logger.setLevel(settings.level)
    namespace_logger.addHandler(settings.handler(log_file))
    namespace_logger.propagate = False

    get_logger(__name__).info(
        "Application logging configured",
        log_file=str(log_file),
        log_level=stdlib_logging.getLevelName(settings.level).lower(),
        max_bytes=settings.max_bytes,
        backup_count=settings.backup_count,
    )
    return log_file
