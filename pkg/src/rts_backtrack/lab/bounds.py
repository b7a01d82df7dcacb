"""
Closed-form solution-cost bounds as functions of the learning quota
"""

from fractions import Fraction
from typing import Union

import numpy as np

from rts_backtrack.exceptions import ConfigurationError
from rts_backtrack.models.costs import INF, Cost, as_fraction, is_finite, normalize

Real = Union[int, float, str, Fraction]


def exponential_bound(theta: Real, d0: Real, delta: int, epsilon: Real, quota: Real) -> float:
    """
    Exponential bound on the solution cost of a θ-admissible π(θ,T) search.

    (2θ·d0 + Δε/ln 2)·2^(T/(Δε)). Δ is a problem-dependent constant with no known
    construction, so callers pick it.

    Args:
        theta: Admissibility weight
        d0: Distance from the start state to the goals
        delta: Positive integer constant Δ
        epsilon: Cost quantum
        quota: Learning quota T (``inf`` gives ``inf``)

    Returns:
        The bound as a float

    Raises:
        ConfigurationError: ``delta`` is not a positive integer
    """
    if delta < 1:
        raise ConfigurationError(f"delta must be a positive integer, got {delta}")
    quota = float(quota)
    if not np.isfinite(quota):
        return INF
    step = delta * float(as_fraction(epsilon))
    base = 2 * float(as_fraction(theta)) * float(as_fraction(d0)) + step / np.log(2)
    return float(base * np.exp2(quota / step))


def piecewise_bound(theta: Real, d0: Cost, quota: Cost) -> Cost:
    """3θ·d0 + 2T, exact for exact inputs."""
    if not is_finite(d0) or not is_finite(quota):
        return INF
    return normalize(3 * as_fraction(theta) * Fraction(d0) + 2 * Fraction(quota))


def slat_bound(d0: Cost, quota: Cost) -> Cost:
    """d0 + T."""
    if not is_finite(d0) or not is_finite(quota):
        return INF
    return normalize(Fraction(d0) + Fraction(quota))
