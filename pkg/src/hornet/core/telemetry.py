"""OpenTelemetry tracing for verification runs.

Each pipeline phase (parse, generate, saturate, query) runs in its own span
carrying `hornet.*` attributes. Telemetry is opt-in; when it is off the
tracer is the OpenTelemetry no-op tracer and phase spans cost nothing.
"""

from __future__ import annotations

import logging as stdlib_logging
import os
import socket
import sys
from collections.abc import Iterator, Mapping
from contextlib import contextmanager
from dataclasses import dataclass
from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as get_version
from typing import TYPE_CHECKING, Protocol, cast

from opentelemetry import trace
from opentelemetry._logs import get_logger_provider, set_logger_provider
from opentelemetry.exporter.otlp.proto.http._log_exporter import OTLPLogExporter
from opentelemetry.exporter.otlp.proto.http.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk._logs import LoggerProvider, LoggingHandler
from opentelemetry.sdk._logs.export import BatchLogRecordProcessor
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor
from opentelemetry.trace import Span, SpanContext
from opentelemetry.util.types import AttributeValue
from structlog.contextvars import bind_contextvars

if TYPE_CHECKING:
    from hornet.config import Config

_LOGGER_NAMESPACE = "hornet"
_OTEL_LOG_HANDLER_NAME = "hornet-otel-log-export"
_FLUSH_TIMEOUT_MILLIS = 2000
_ATTRIBUTE_PREFIX = "hornet."


@dataclass(frozen=True)
class TelemetrySession:
    enabled: bool
    logs_export_enabled: bool


class _Flushable(Protocol):
    def force_flush(self, timeout_millis: int = ...) -> bool: ...


class _TelemetryState:
    tracer_provider: TracerProvider | None = None
    logger_provider: LoggerProvider | None = None
    log_handler: LoggingHandler | None = None


def _service_version() -> str:
    try:
        return get_version("hornet")
    except PackageNotFoundError:
        return "0.0.0"


def _resource(config: Config) -> Resource:
    attributes: dict[str, AttributeValue] = {
        "service.version": _service_version(),
        "service.instance.id": socket.gethostname(),
        "hornet.saturation.max_clauses": config.saturation.max_clauses,
        "hornet.saturation.max_term_depth": config.saturation.max_term_depth,
        "hornet.saturation.index": config.saturation.use_index,
        "hornet.query.depth_limit": config.query.depth_limit,
    }
    if os.getenv("OTEL_SERVICE_NAME") is None:
        attributes["service.name"] = config.telemetry.service_name
    return Resource.create(attributes)


def _is_proxy(provider: object) -> bool:
    """Whether `provider` is the placeholder installed before any SDK provider is set."""
    return type(provider).__name__.startswith("Proxy")


def _install_tracer_provider(resource: Resource, endpoint: str | None) -> None:
    if _TelemetryState.tracer_provider is not None:
        return
    current = trace.get_tracer_provider()
    if not _is_proxy(current):
        _TelemetryState.tracer_provider = cast("TracerProvider", current)
        return
    provider = TracerProvider(resource=resource)
    provider.add_span_processor(BatchSpanProcessor(OTLPSpanExporter(endpoint=endpoint) if endpoint else OTLPSpanExporter()))
    trace.set_tracer_provider(provider)
    _TelemetryState.tracer_provider = provider


def _install_log_export(resource: Resource, endpoint: str | None) -> None:
    if _TelemetryState.logger_provider is not None:
        return
    current = get_logger_provider()
    if _is_proxy(current):
        provider = LoggerProvider(resource=resource)
        exporter = OTLPLogExporter(endpoint=endpoint) if endpoint else OTLPLogExporter()
        provider.add_log_record_processor(BatchLogRecordProcessor(exporter))
        set_logger_provider(provider)
    else:
        provider = cast("LoggerProvider", current)
    handler = LoggingHandler(level=stdlib_logging.NOTSET, logger_provider=provider)
    handler.set_name(_OTEL_LOG_HANDLER_NAME)
    stdlib_logging.getLogger(_LOGGER_NAMESPACE).addHandler(handler)
    _TelemetryState.logger_provider = provider
    _TelemetryState.log_handler = handler


def _warn(message: str) -> None:
    sys.stderr.write(f"warning: telemetry: {message}\n")


def configure_telemetry(config: Config) -> TelemetrySession:
    """Install OTLP trace export and, when asked, log export for this process.

    Exporter failures degrade to a disabled session instead of failing the run.
    """
    if not config.telemetry.enabled:
        return TelemetrySession(enabled=False, logs_export_enabled=False)

    resource = _resource(config)
    try:
        _install_tracer_provider(resource, config.telemetry.trace_endpoint)
    except Exception as exc:
        _warn(f"failed to initialize trace exporter ({exc}); traces disabled for this run")
        return TelemetrySession(enabled=False, logs_export_enabled=False)

    if not config.telemetry.export_logs:
        return TelemetrySession(enabled=True, logs_export_enabled=False)
    try:
        _install_log_export(resource, config.telemetry.logs_endpoint)
    except Exception as exc:
        _warn(f"failed to initialize log exporter ({exc}); log export disabled for this run")
        return TelemetrySession(enabled=True, logs_export_enabled=False)
    return TelemetrySession(enabled=True, logs_export_enabled=True)


def get_tracer(name: str) -> trace.Tracer:
    return trace.get_tracer(name, _service_version())


def format_trace_id(trace_id: int) -> str:
    return f"{trace_id:032x}"


def format_span_id(span_id: int) -> str:
    return f"{span_id:016x}"


def format_trace_flags(trace_flags: int) -> str:
    return f"{int(trace_flags):02x}"


def get_current_span_context() -> SpanContext | None:
    """The active span context, or None when no valid span is current."""
    span_context = trace.get_current_span().get_span_context()
    return span_context if span_context.is_valid else None


def get_current_trace_id() -> str | None:
    span_context = get_current_span_context()
    return None if span_context is None else format_trace_id(span_context.trace_id)


def bind_trace_contextvars() -> None:
    """Copy the active trace ids into structlog contextvars."""
    span_context = get_current_span_context()
    if span_context is not None:
        bind_contextvars(
            trace_id=format_trace_id(span_context.trace_id),
            span_id=format_span_id(span_context.span_id),
            trace_flags=format_trace_flags(span_context.trace_flags),
        )


def telemetry_is_active() -> bool:
    return _TelemetryState.tracer_provider is not None or _TelemetryState.logger_provider is not None


def set_span_attributes(span: Span, attributes: Mapping[str, AttributeValue | None]) -> None:
    """Set every attribute whose value is not None."""
    for key, value in attributes.items():
        if value is not None:
            span.set_attribute(key, value)


def counter_attributes(prefix: str, counters: Mapping[str, int | float]) -> dict[str, AttributeValue]:
    """`{"resolutions": 4}` under prefix "saturation" becomes `{"hornet.saturation.resolutions": 4}`."""
    return {f"{_ATTRIBUTE_PREFIX}{prefix}.{key}": value for key, value in counters.items()}


@contextmanager
def phase_span(
    tracer: trace.Tracer, phase: str, attributes: Mapping[str, AttributeValue | None] | None = None
) -> Iterator[Span]:
    """Run one pipeline phase inside span `verifier.<phase>`."""
    with tracer.start_as_current_span(f"verifier.{phase}") as span:
        set_span_attributes(span, {"hornet.phase": phase, **(attributes or {})})
        yield span


def _flush(provider: _Flushable | None, what: str, timeout_millis: int) -> bool:
    if provider is None:
        return True
    try:
        flushed = provider.force_flush(timeout_millis)
    except Exception as exc:
        _warn(f"{what} flush raised ({exc}); some {what} data may have been dropped")
        return False
    if not flushed:
        _warn(f"{what} flush timed out; some {what} data may have been dropped")
    return flushed


def force_flush_telemetry(timeout_millis: int = _FLUSH_TIMEOUT_MILLIS) -> bool:
    """Flush both providers; False when either failed or timed out."""
    traces_ok = _flush(_TelemetryState.tracer_provider, "trace", timeout_millis)
    logs_ok = _flush(_TelemetryState.logger_provider, "log", timeout_millis)
    return traces_ok and logs_ok


def reset_telemetry_for_tests() -> None:
    """Drop installed providers and the log export handler."""
    if _TelemetryState.log_handler is not None:
        stdlib_logging.getLogger(_LOGGER_NAMESPACE).removeHandler(_TelemetryState.log_handler)
        _TelemetryState.log_handler.close()
    if _TelemetryState.logger_provider is not None:
        _TelemetryState.logger_provider.shutdown()
    if _TelemetryState.tracer_provider is not None:
        _TelemetryState.tracer_provider.shutdown()
    _TelemetryState.logger_provider = None
    _TelemetryState.tracer_provider = None
    _TelemetryState.log_handler = None
