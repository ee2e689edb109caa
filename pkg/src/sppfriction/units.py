"""Parsing of unit-suffixed command-line quantities into SI values."""

from __future__ import annotations

import math
import re

from .config import CONSTANTS
from .errors import DomainError

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_PATTERN = re.compile(rf"^\s*({_NUMBER})\s*([A-Za-z/]*)\s*$")

DEBYE = 1e-21 / CONSTANTS.c  # C m

FREQUENCY_UNITS = {
    "thz": 2.0 * math.pi * 1e12,
    "ghz": 2.0 * math.pi * 1e9,
    "hz": 2.0 * math.pi,
    "rad/s": 1.0,
}
LENGTH_UNITS = {"nm": 1e-9, "um": 1e-6, "m": 1.0}
VELOCITY_UNITS = {"c": CONSTANTS.c, "m/s": 1.0}
DIPOLE_UNITS = {"": 1.0, "cm": 1.0, "d": DEBYE, "debye": DEBYE}


def _parse(text, table, kind, allow_bare=False):
    if isinstance(text, (int, float)):
        if allow_bare:
            return float(text)
        raise DomainError(f"{kind} {text!r} needs an explicit unit suffix ({', '.join(k for k in table if k)})")
    match = _PATTERN.match(str(text))
    if not match:
        raise DomainError(f"cannot parse {kind} {text!r}")
    value, unit = float(match.group(1)), match.group(2).lower()
    if unit == "" and not allow_bare:
        raise DomainError(f"{kind} {text!r} needs an explicit unit suffix ({', '.join(k for k in table if k)})")
    if unit not in table:
        raise DomainError(f"unknown {kind} unit {match.group(2)!r} in {text!r}")
    return value * table[unit]


def parse_frequency(text):
    """'646THz' (cycles) or '4.06e15rad/s' -> rad/s."""
    return _parse(text, FREQUENCY_UNITS, "frequency")


def parse_length(text):
    """'3nm' or '3e-9m' -> m."""
    return _parse(text, LENGTH_UNITS, "length")


def parse_velocity(text):
    """'0.273c' or '8.2e7m/s' -> m/s."""
    return _parse(text, VELOCITY_UNITS, "velocity")


def parse_dipole(text):
    """'1e-29', '1e-29Cm' or '3D' (debye) -> C m."""
    return _parse(text, DIPOLE_UNITS, "dipole moment", allow_bare=True)


AXIS_PARSERS = {
    "a": float,
    "b": float,
    "v": parse_velocity,
    "d": parse_length,
    "omega0": parse_frequency,
}
