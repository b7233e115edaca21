"""Core layer for hornet.

This module contains the error types, output handlers, run models and the
Verifier that ties the pipeline together.
"""

from typing import TYPE_CHECKING

from hornet.core.errors import (
    ConfigurationError,
    Diagnostic,
    DiagnosticKind,
    ExitCode,
    HornetError,
    InputFileError,
    SaturationLimitError,
    SpecificationError,
)
from hornet.core.output import (
    CollectingOutputHandler,
    DefaultOutputHandler,
    OutputHandler,
    SilentOutputHandler,
)

if TYPE_CHECKING:
    from hornet.core.models import QueryOutcome, RunConfig, RunReport, RunStats
    from hornet.core.verifier import Verifier


def __getattr__(name: str) -> object:
    """Lazy import for classes that pull in the engine."""
    if name in {"QueryOutcome", "RunConfig", "RunReport", "RunStats"}:
        from hornet.core import models

        return getattr(models, name)
    if name == "Verifier":
        from hornet.core.verifier import Verifier

        return Verifier
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "CollectingOutputHandler",
    "ConfigurationError",
    "DefaultOutputHandler",
    "Diagnostic",
    "DiagnosticKind",
    "ExitCode",
    "HornetError",
    "InputFileError",
    "OutputHandler",
    "QueryOutcome",
    "RunConfig",
    "RunReport",
    "RunStats",
    "SaturationLimitError",
    "SpecificationError",
    "Verifier",
]
