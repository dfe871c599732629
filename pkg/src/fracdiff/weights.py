"""Grünwald-Letnikov weights c_j = dt^-alpha * (-1)^j * binom(alpha, j)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, InvalidCount


@dataclass(frozen=True)
class GlWeights:
    """Weights ``c[0..J]`` including the ``dt**-alpha`` factor."""

    alpha: float
    dt: float
    c: np.ndarray

    def __post_init__(self):
        self.c.flags.writeable = False

    def __len__(self) -> int:
        return len(self.c)

    @property
    def support(self) -> int:
        """Length of the non-zero prefix of ``c``; shorter than ``len`` only for integer alpha."""
        if float(self.alpha).is_integer():
            return min(len(self.c), int(self.alpha) + 1)
        return len(self.c)


def compute_weights(alpha: float, dt: float, J: int) -> GlWeights:
    """Run the recurrence c_0 = dt^-alpha, c_j = (1 - (1 + alpha)/j) c_{j-1} for j = 1..J."""
    if J < 0:
        raise InvalidCount(f"need J >= 0, got {J}")
    c = np.empty(J + 1)
    c[0] = dt ** (-alpha)
    for j in range(1, J + 1):
        c[j] = (1.0 - (1.0 + alpha) / j) * c[j - 1]
    return GlWeights(alpha=alpha, dt=dt, c=c)


def weight_partial_sum(w: GlWeights, J: int) -> float:
    """dt^alpha * sum_{j<=J} c_j, the dimensionless partial sum (tends to 0 as J grows)."""
    if J < 0 or J >= len(w.c):
        raise IndexOutOfRange(f"J={J} outside 0..{len(w.c) - 1}")
    return float(w.dt ** w.alpha * np.sum(w.c[: J + 1]))
