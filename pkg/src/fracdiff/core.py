"""Problem statement, grids and solution containers.

A problem is the time-fractional diffusion equation

    D_t^alpha u = k_alpha * u_xx,   0 < x < L,  0 < t <= T,

with a Caputo time derivative of order ``0 < alpha <= 2``, Dirichlet data
``u(0, t) = g0(t)``, ``u(L, t) = gL(t)`` and initial data ``u(x, 0) = p0(x)``
plus, for ``alpha > 1``, ``u_t(x, 0) = p1(x)``.

Initial and boundary data are plain callables evaluated on numpy arrays of
grid points. Numbers are accepted as constant functions.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import (
    DegenerateGrid,
    MissingInitialRate,
    NonPositiveDiffusivity,
    OrderOutOfRange,
)

FieldFunction = Union[Callable[[np.ndarray], "np.ndarray | float"], float, int]

# |u| above this (or any non-finite value) marks a run as diverged
DIVERGENCE_THRESHOLD = 1e12


def evaluate(fn: FieldFunction, points) -> np.ndarray:
    """Sample ``fn`` at ``points``, broadcasting constant results to the same shape."""
    pts = np.asarray(points, dtype=float)
    value = fn if isinstance(fn, (int, float)) else fn(pts)
    return np.array(np.broadcast_to(np.asarray(value, dtype=float), pts.shape))


@dataclass(frozen=True)
class FractionalOrder:
    alpha: float

    @property
    def n_ic(self) -> int:
        """Number of initial functions the problem needs: 1 for alpha <= 1, else 2."""
        return 1 if self.alpha <= 1 else 2

    @property
    def is_integer(self) -> bool:
        return float(self.alpha).is_integer()


@dataclass(frozen=True)
class Grid:
    """Uniform space grid with N subintervals and time grid with F steps."""

    L: float
    N: int
    T: float
    F: int

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def dt(self) -> float:
        return self.T / self.F

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.N + 1) * self.h

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.F + 1) * self.dt

    @classmethod
    def from_dt(cls, L: float, N: int, T: float, dt: float) -> "Grid":
        """Grid with step exactly ``dt``; the final time becomes ``F * dt`` with F = ceil(T/dt)."""
        F = max(1, math.ceil(T / dt - 1e-9))
        return cls(L=L, N=N, T=F * dt, F=F)


@dataclass(frozen=True)
class ProblemSpec:
    order: FractionalOrder
    k_alpha: float
    grid: Grid
    p0: FieldFunction
    g0: FieldFunction
    gL: FieldFunction
    p1: Optional[FieldFunction] = None

    @property
    def alpha(self) -> float:
        return self.order.alpha

    def with_grid(self, grid: Grid) -> "ProblemSpec":
        return dataclasses.replace(self, grid=grid)

    def initial_functions(self) -> list:
        """[p0] or [p0, p1], matching ``order.n_ic``."""
        if self.order.n_ic == 1:
            return [self.p0]
        return [self.p0, self.p1]

    def boundary_values(self, t) -> tuple[np.ndarray, np.ndarray]:
        return evaluate(self.g0, t), evaluate(self.gL, t)


def validate(spec: ProblemSpec) -> ProblemSpec:
    """Check the problem statement and return it unchanged."""
    alpha = spec.order.alpha
    if not (0.0 < alpha <= 2.0) or not math.isfinite(alpha):
        raise OrderOutOfRange(f"alpha must lie in (0, 2], got {alpha!r}")
    if not (spec.k_alpha > 0.0) or not math.isfinite(spec.k_alpha):
        raise NonPositiveDiffusivity(f"k_alpha must be positive, got {spec.k_alpha!r}")
    g = spec.grid
    if g.N < 2 or g.F < 1:
        raise DegenerateGrid(f"need N >= 2 and F >= 1, got N={g.N}, F={g.F}")
    if not (g.L > 0.0 and g.T > 0.0):
        raise DegenerateGrid(f"need L > 0 and T > 0, got L={g.L}, T={g.T}")
    if alpha > 1.0 and spec.p1 is None:
        raise MissingInitialRate(f"alpha={alpha} > 1 requires the initial rate p1")
    return spec


class Scheme(enum.Enum):
    FDM_EXPLICIT = "fdm"
    FEM_IMPLICIT = "fem"


@dataclass(frozen=True)
class SolutionField:
    """Nodal values ``values[f, i] = u(x_i, t_f)`` for the levels actually computed.

    A diverged run stores fewer than ``grid.F + 1`` levels.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values.flags.writeable = False

    @property
    def levels(self) -> int:
        return self.values.shape[0]

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def t(self) -> np.ndarray:
        return self.grid.t[: self.levels]

    def trace(self, x: float) -> np.ndarray:
        """Time series at position ``x``, linearly interpolated between nodes."""
        xs = self.grid.x
        i = int(np.clip(np.searchsorted(xs, x) - 1, 0, self.grid.N - 1))
        w = (x - xs[i]) / self.grid.h
        if np.isclose(w, 0.0, atol=1e-12):
            return self.values[:, i].copy()
        if np.isclose(w, 1.0, atol=1e-12):
            return self.values[:, i + 1].copy()
        return (1.0 - w) * self.values[:, i] + w * self.values[:, i + 1]


@dataclass(frozen=True)
class SolverReport:
    scheme: Scheme
    stability_dt_max: Optional[float]
    diverged: bool
    max_abs_value: float
    wall_time: float


def blew_up(values: np.ndarray) -> bool:
    return not np.all(np.isfinite(values)) or bool(np.max(np.abs(values)) > DIVERGENCE_THRESHOLD)


@dataclass(frozen=True)
class ExplicitDt:
    """Use exactly this time step; the final time is rounded up to a whole step."""

    dt: float


@dataclass(frozen=True)
class AutoDt:
    """Pick ``dt`` from the explicit stability bound times ``safety``."""

    safety: float = 0.9

    def __post_init__(self):
        if not (0.0 < self.safety <= 1.0):
            raise ValueError(f"safety must lie in (0, 1], got {self.safety}")


DtPolicy = Union[ExplicitDt, AutoDt, None]
