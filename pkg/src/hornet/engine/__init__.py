"""Saturation and query answering."""

from hornet.engine.derivation import Derivation, check_derivation, format_dot, format_text
from hornet.engine.query import Verdict, VerdictKind, check_correspondence, decide, derivable
from hornet.engine.rules import CONCLUSION, Hypothesis, Selection, Simplifier, resolve, select, strengthen
from hornet.engine.saturate import SaturationResult, SaturationStats, saturate

__all__ = [
    "CONCLUSION",
    "Derivation",
    "Hypothesis",
    "SaturationResult",
    "SaturationStats",
    "Selection",
    "Simplifier",
    "Verdict",
    "VerdictKind",
    "check_correspondence",
    "check_derivation",
    "decide",
    "derivable",
    "format_dot",
    "format_text",
    "resolve",
    "saturate",
    "select",
    "strengthen",
]
