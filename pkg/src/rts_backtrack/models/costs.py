"""
Exact cost arithmetic in units of the cost quantum ε.

Edge weights and initial heuristic values are integers (multiples of ε). Weighted
updates may produce fractions, so every cost is an ``int``, a ``Fraction`` or the
float ``INF``.
"""

import math
from fractions import Fraction
from typing import Union

from rts_backtrack.exceptions import ValidationError

Cost = Union[int, Fraction, float]

INF: float = math.inf


def normalize(value: Cost) -> Cost:
    """Collapse integral fractions to ``int`` so equal costs compare and hash alike."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value.numerator)
    return value


def is_finite(value: Cost) -> bool:
    return not (isinstance(value, float) and math.isinf(value))


def scale(weight: Fraction, value: Cost) -> Cost:
    """Multiply a cost by a positive weight, keeping infinity infinite."""
    if not is_finite(value):
        return INF
    return normalize(Fraction(weight) * value)


def as_fraction(value: Union[int, float, str, Fraction]) -> Fraction:
    """
    Convert a user-supplied real to an exact fraction.

    Floats go through their shortest decimal representation so that ``0.1``
    becomes ``1/10`` rather than the nearest binary fraction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def to_units(value: Union[int, float, str, Fraction], epsilon: Fraction, integral: bool = True) -> Cost:
    """
    Convert a real cost to ε units.

    Args:
        value: Real-valued cost (``inf`` allowed)
        epsilon: Cost quantum
        integral: Require the result to be a whole number of quanta

    Returns:
        Cost in ε units
    """
    if isinstance(value, float) and math.isinf(value):
        return INF
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    units = as_fraction(value) / epsilon
    if integral and units.denominator != 1:
        raise ValidationError(f"Value {value} is not a multiple of epsilon {epsilon}")
    return normalize(units)


def to_real(value: Cost, epsilon: Fraction) -> float:
    if not is_finite(value):
        return INF
    return float(Fraction(value) * epsilon)


def format_cost(value: Cost, epsilon: Fraction) -> str:
    """Render a cost in real units the way the trace tables print it."""
    if not is_finite(value):
        return "inf"
    return f"{to_real(value, epsilon):g}"


def exact_text(value: Cost, epsilon: Fraction) -> str:
    """
    Render a cost in real units without rounding.

    Terminating decimals print as decimals (``0.7``), anything else as a ratio
    (``1/3``); ``as_fraction`` reads both forms back exactly.
    """
    if not is_finite(value):
        return "inf"
    real = Fraction(value) * epsilon
    if real.denominator == 1:
        return str(real.numerator)
    rest = real.denominator
    for prime in (2, 5):
        while rest % prime == 0:
            rest //= prime
    if rest != 1:
        return f"{real.numerator}/{real.denominator}"
    digits = 0
    while (10 ** digits) % real.denominator:
        digits += 1
    scaled = abs(real.numerator) * 10 ** digits // real.denominator
    text = str(scaled).rjust(digits + 1, "0")
    sign = "-" if real < 0 else ""
    return f"{sign}{text[:-digits]}.{text[-digits:]}"
