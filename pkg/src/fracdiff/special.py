"""Real gamma and reciprocal gamma with explicit pole handling."""

from __future__ import annotations

import math

from .errors import PoleArgument

POLE_TOL = 1e-12


def _pole(x: float) -> bool:
    n = round(x)
    return n <= 0 and abs(x - n) <= POLE_TOL


def gamma(x: float) -> float:
    """Gamma function on the real line; raises PoleArgument at 0, -1, -2, ..."""
    x = float(x)
    if _pole(x):
        raise PoleArgument(f"gamma has a pole at {x!r}")
    return math.gamma(x)


def recip_gamma(x: float) -> float:
    """1/Gamma(x), an entire function: exactly 0 at the non-positive integers."""
    x = float(x)
    if _pole(x):
        return 0.0
    try:
        g = math.gamma(x)
    except OverflowError:
        return 0.0  # x > 171.6: 1/Gamma underflows
    if g != 0.0:
        return 1.0 / g
    # Gamma underflowed far out on the negative axis; use reflection
    s = math.sin(math.pi * x) / math.pi
    try:
        return s * math.gamma(1.0 - x)
    except OverflowError:
        return math.copysign(math.inf, s)
