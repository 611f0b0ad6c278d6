"""Labelled proof search for propositional abstract separation logics."""

from .config import BBI, PASL, SEPARATA, ConfigError, LogicConfig, preset
from .formula import Formula, ParseError, parse, show
from .search import (NotProved, Prover, ResourceExhausted, SearchLimits,
                     Valid, prove)

__all__ = [
    "BBI", "PASL", "SEPARATA", "ConfigError", "LogicConfig", "preset",
    "Formula", "ParseError", "parse", "show",
    "NotProved", "Prover", "ResourceExhausted", "SearchLimits", "Valid",
    "prove",
]

__version__ = "0.1.0"
