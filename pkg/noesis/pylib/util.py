from fractions import Fraction

import regex as re

from noesis.pylib import const

RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")

Value = int | str


def to_rational(text: str) -> Fraction:
    """Parse "p/q" (or a bare integer) into an exact fraction."""
    match = RATIONAL_RE.match(text)
    if not match:
        msg = f"not a rational: {text!r}"
        raise ValueError(msg)
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) else 1
    if denominator == 0:
        msg = f"zero denominator: {text!r}"
        raise ValueError(msg)
    return Fraction(numerator, denominator)


def rational_str(value: Fraction | int) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def decimal_str(value: Fraction | int, places: int = const.DECIMAL_PLACES) -> str:
    """Round half-even to a fixed number of places without touching floats."""
    scaled = round(Fraction(value) * 10**places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def rational_json(value: Fraction | int) -> dict[str, str]:
    return {"value": rational_str(value), "decimal": decimal_str(value)}


def value_key(value: Value) -> tuple:
    """Sort integers before named constants so mixed tuples order deterministically."""
    if isinstance(value, str):
        return (1, 0, value)
    return (0, value, "")
