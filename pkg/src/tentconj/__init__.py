"""Exact computation of conjugacies between the tent map and PL unimodal maps."""

from .exactnum import Dyadic, Rat, binary_digits, format_rat, parse_rat
from .plmap import PLFunction, PLMap, compose, identity, iterate, skew_tent, tent

__all__ = [
    "Dyadic",
    "PLFunction",
    "PLMap",
    "Rat",
    "binary_digits",
    "compose",
    "format_rat",
    "identity",
    "iterate",
    "parse_rat",
    "skew_tent",
    "tent",
]

__version__ = "0.1.0"
