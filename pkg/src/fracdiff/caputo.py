"""Discrete Caputo derivative of a uniformly sampled series.

The Grünwald-Letnikov sum approximates the Riemann-Liouville derivative.
Subtracting the initial-value terms

    sum_{k < n_ic} t^(k - alpha) / Gamma(k - alpha + 1) * u^(k)(0)

turns it into a Caputo derivative. Initial values may be scalars or numpy
arrays (one entry per node); everything broadcasts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import FractionalOrder
from .errors import IndexOutOfRange, NonPositiveTime
from .special import recip_gamma
from .weights import GlWeights


@dataclass(frozen=True)
class InitialData:
    """``p[k]`` is the k-th time derivative of u at t = 0, for k < n_ic."""

    p: tuple

    def __init__(self, p: Sequence):
        object.__setattr__(self, "p", tuple(p))


def gl_sum(samples, w: GlWeights, f: int):
    """sum_{j=0}^{f} c_j * samples[f - j]; ``samples`` may carry trailing node axes."""
    samples = np.asarray(samples, dtype=float)
    if f < 0 or f > len(samples) - 1 or f > len(w.c) - 1:
        raise IndexOutOfRange(f"f={f} exceeds samples ({len(samples)}) or weights ({len(w.c)})")
    total = np.tensordot(w.c[: f + 1], samples[f::-1], axes=1)
    return float(total) if np.ndim(total) == 0 else total


def initial_correction(alpha: float, t: float, init: InitialData):
    if t <= 0:
        raise NonPositiveTime(f"correction undefined at t={t}")
    n_ic = FractionalOrder(alpha).n_ic
    if len(init.p) != n_ic:
        raise ValueError(f"alpha={alpha} needs {n_ic} initial values, got {len(init.p)}")
    total = 0.0
    for k, pk in enumerate(init.p):
        r = recip_gamma(k - alpha + 1.0)
        if r != 0.0:
            total = total + t ** (k - alpha) * r * np.asarray(pk, dtype=float)
    return total


def discrete_caputo(samples, init: InitialData, w: GlWeights, f: int):
    """Caputo derivative of order ``w.alpha`` at t_f = f*dt, f >= 1."""
    return gl_sum(samples, w, f) - initial_correction(w.alpha, f * w.dt, init)
