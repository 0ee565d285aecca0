"""
Import Data Utilities
Parsing of command-line numbers: integers, dyadic literals and decimals
"""

from __future__ import annotations

import logging
import re
from fractions import Fraction

logger = logging.getLogger(__name__)

POWER_FORM = re.compile(r"^\s*([+-]?\d+)\s*/\s*2\s*\^\s*(\d+)\s*$")


def parse_integer(text: str, name: str = "value") -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {text!r}") from None


def parse_rational(text: str, name: str = "value") -> Fraction:
    """p/q, p/2^k, an integer or a decimal, kept exact"""
    match = POWER_FORM.match(text)
    if match:
        return Fraction(int(match.group(1)), 1 << int(match.group(2)))
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{name} must be a rational number, got {text!r}") from None


def is_dyadic(value: Fraction) -> bool:
    denominator = value.denominator
    return not denominator & (denominator - 1)


def parse_dyadic(text: str, level: int, name: str = "value") -> Fraction:
    """
    A dyadic rational from the command line.

    Exact forms pass through unchanged; anything else is snapped to the
    nearest multiple of 2^-level and a warning is logged.
    """
    value = parse_rational(text, name)
    if is_dyadic(value):
        return value
    snapped = Fraction(round(value * (1 << level)), 1 << level)
    logger.warning(f"{name} {text} is not dyadic; snapped to {snapped} (level {level})")
    return snapped


def parse_real(text: str, name: str = "value") -> float:
    return float(parse_rational(text, name))
