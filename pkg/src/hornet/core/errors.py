"""Custom error types for hornet.

Engine-level negative outcomes (no unifier, unsatisfiable constraints, a
clause removed by an assertion) are ordinary return values. The exceptions
below are reserved for problems the user has to act on.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum, StrEnum
from typing import TYPE_CHECKING, override

if TYPE_CHECKING:
    from hornet.engine.saturate import SaturationResult


class ExitCode(IntEnum):
    """Process exit codes of `hornet verify`.

    - 0: every query was proved
    - 1: at least one query has a clause-level derivation
    - 2: at least one query is inconclusive and none is derivable
    - 3: the input could not be read or validated
    """

    PROVED = 0
    DERIVABLE = 1
    INCONCLUSIVE = 2
    INPUT_ERROR = 3


class DiagnosticKind(StrEnum):
    SYNTAX = "syntax"
    UNKNOWN_SYMBOL = "unknown-symbol"
    ARITY = "arity"
    BLOCKING_CONCLUSION = "blocking-conclusion"
    DESTRUCTOR_IN_CLAUSE = "destructor-in-clause"
    INVALID_QUERY = "invalid-query"
    INVALID_ASSERTION = "invalid-assertion"
    DUPLICATE_SYMBOL = "duplicate-symbol"
    INVALID_RULE = "invalid-rule"


@dataclass(frozen=True, slots=True)
class Diagnostic:
    line: int
    column: int
    message: str
    kind: DiagnosticKind

    @override
    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class HornetError(Exception):
    """Base exception for all hornet errors."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(message)


class SpecificationError(HornetError):
    """The protocol specification failed to parse or validate.

    Attributes:
        diagnostics: every problem found, in source order
        source: the file the text came from, when known
    """

    def __init__(self, message: str, diagnostics: list[Diagnostic], source: str | None = None) -> None:
        super().__init__(message)
        self.diagnostics = sorted(diagnostics, key=lambda diag: (diag.line, diag.column))
        self.source = source

    @override
    def __str__(self) -> str:
        prefix = f"{self.source}:" if self.source else ""
        parts = [self.message]
        parts.extend(f"{prefix}{diagnostic}" for diagnostic in self.diagnostics)
        return "\n".join(parts)


class InputFileError(HornetError):
    """The input file is missing or unreadable."""

    def __init__(self, message: str, path: str | None = None, cause: Exception | None = None) -> None:
        super().__init__(message)
        self.path = path
        self.cause = cause

    @override
    def __str__(self) -> str:
        parts = [self.message]
        if self.path:
            parts.append(f"Path: {self.path}")
        if self.cause:
            parts.append(f"Caused by: {self.cause}")
        return "\n".join(parts)


class ConfigurationError(HornetError):
    """Exception raised when configuration is invalid or missing."""

    def __init__(self, message: str, config_key: str | None = None) -> None:
        super().__init__(message)
        self.config_key = config_key

    @override
    def __str__(self) -> str:
        if self.config_key:
            return f"{self.message}\nKey: {self.config_key}"
        return self.message


class SaturationLimitError(HornetError):
    """Saturation stopped before a fixpoint.

    Attributes:
        limit: which guard tripped ("max-clauses" or "max-term-depth")
        partial: the state reached so far, solved clauses included
    """

    def __init__(self, message: str, limit: str, partial: SaturationResult) -> None:
        super().__init__(message)
        self.limit = limit
        self.partial = partial

    @override
    def __str__(self) -> str:
        return f"{self.message}\nLimit: {self.limit}"
