"""Explicit finite-difference stepper for the time-fractional diffusion equation.

Each level is obtained from the previous one through the three-point
Laplacian, the Grünwald-Letnikov tail sum over all older levels and the
initial-value correction:

    u_i^f = dt^a [ (a dt^-a - 2r) u_i^{f-1} + r (u_{i+1}^{f-1} + u_{i-1}^{f-1})
                   - sum_{j=2}^{f} c_j u_i^{f-j} + corr_i(t_f) ],   r = k/h^2.

The self-coefficient in front of u_i^{f-1} stays non-negative as long as
dt <= (h^2 a / (2k))^(1/a); see :func:`stable_dt_max`.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .caputo import InitialData, initial_correction
from .core import (
    AutoDt,
    DtPolicy,
    ExplicitDt,
    Grid,
    ProblemSpec,
    Scheme,
    SolutionField,
    SolverReport,
    blew_up,
    evaluate,
    validate,
)
from .errors import Diverged
from .weights import GlWeights, compute_weights


class StabilityWarning(UserWarning):
    """The requested explicit time step exceeds the positivity bound."""


@dataclass(frozen=True)
class FdmOptions:
    dt_policy: DtPolicy = None
    # keep only history terms j <= memory_window; None means full memory
    memory_window: Optional[int] = None

    def __post_init__(self):
        if self.memory_window is not None and self.memory_window < 2:
            raise ValueError(f"memory_window must be >= 2, got {self.memory_window}")


def stable_dt_max(h: float, alpha: float, k_alpha: float) -> float:
    return (h * h * alpha / (2.0 * k_alpha)) ** (1.0 / alpha)


def resolve_grid(spec: ProblemSpec, policy: DtPolicy) -> Grid:
    """Time grid implied by ``policy``; ``None`` keeps the grid of ``spec``."""
    g = spec.grid
    if policy is None:
        return g
    if isinstance(policy, ExplicitDt):
        return Grid.from_dt(g.L, g.N, g.T, policy.dt)
    if isinstance(policy, AutoDt):
        dt = policy.safety * stable_dt_max(g.h, spec.alpha, spec.k_alpha)
        # round dt down so that a whole number of steps lands on T
        return Grid(L=g.L, N=g.N, T=g.T, F=max(1, math.ceil(g.T / dt)))
    raise TypeError(f"unknown dt policy {policy!r}")


def nodal_initial_data(spec: ProblemSpec) -> InitialData:
    x = spec.grid.x
    return InitialData([evaluate(p, x) for p in spec.initial_functions()])


def seed_initial_levels(spec: ProblemSpec) -> np.ndarray:
    """Levels 0..n_ic-1 from the initial data, boundary nodes from the Dirichlet data."""
    g = spec.grid
    x = g.x
    n = min(spec.order.n_ic, g.F + 1)
    levels = np.empty((n, g.N + 1))
    levels[0] = evaluate(spec.p0, x)
    if n == 2:
        levels[1] = levels[0] + g.dt * evaluate(spec.p1, x)
    left, right = spec.boundary_values(g.t[:n])
    levels[:, 0] = left
    levels[:, -1] = right
    return levels


def history_length(weights: GlWeights, f: int, memory_window: Optional[int]) -> int:
    """Largest j entering the memory sum at level f."""
    jmax = min(f, weights.support - 1)
    if memory_window is not None:
        jmax = min(jmax, memory_window)
    return jmax


def step(
    spec: ProblemSpec,
    weights: GlWeights,
    values: np.ndarray,
    f: int,
    *,
    memory_window: Optional[int] = None,
    init: Optional[InitialData] = None,
) -> np.ndarray:
    """Compute level ``f`` from rows ``values[:f]``; raises Diverged on blow-up."""
    g = spec.grid
    a = spec.alpha
    dt_a = g.dt**a
    r = spec.k_alpha / (g.h * g.h)
    prev = values[f - 1]

    rhs = (a / dt_a - 2.0 * r) * prev[1:-1] + r * (prev[2:] + prev[:-2])
    jmax = history_length(weights, f, memory_window)
    if jmax >= 2:
        # rows f-jmax .. f-2 pair with c_jmax .. c_2
        rhs -= weights.c[jmax:1:-1] @ values[f - jmax : f - 1, 1:-1]
    if init is None:
        init = nodal_initial_data(spec)
    corr = initial_correction(a, f * g.dt, init)
    if np.ndim(corr):
        rhs += corr[1:-1]
    elif corr:
        rhs += corr

    new = np.empty(g.N + 1)
    new[1:-1] = dt_a * rhs
    t_f = f * g.dt
    new[0], new[-1] = (float(v) for v in spec.boundary_values(t_f))
    if blew_up(new):
        raise Diverged(f"explicit scheme diverged at level {f}", level=f, values=new)
    return new


def solve_fdm(spec: ProblemSpec, options: FdmOptions = FdmOptions()) -> tuple[SolutionField, SolverReport]:
    start = time.perf_counter()
    validate(spec)
    spec = spec.with_grid(resolve_grid(spec, options.dt_policy))
    g = spec.grid
    bound = stable_dt_max(g.h, spec.alpha, spec.k_alpha)
    if g.dt > bound * (1.0 + 1e-12):
        warnings.warn(
            f"dt={g.dt:.6g} exceeds the explicit stability bound {bound:.6g}",
            StabilityWarning,
            stacklevel=2,
        )

    weights = compute_weights(spec.alpha, g.dt, g.F)
    init = nodal_initial_data(spec)
    values = np.empty((g.F + 1, g.N + 1))
    seeds = seed_initial_levels(spec)
    values[: len(seeds)] = seeds
    last = g.F
    diverged = blew_up(seeds)
    if diverged:
        last = len(seeds) - 1
    else:
        for f in range(len(seeds), g.F + 1):
            try:
                values[f] = step(spec, weights, values, f, memory_window=options.memory_window, init=init)
            except Diverged as exc:
                values[f] = exc.values
                diverged, last = True, f
                break

    field = SolutionField(grid=g, values=values[: last + 1].copy())
    report = SolverReport(
        scheme=Scheme.FDM_EXPLICIT,
        stability_dt_max=bound,
        diverged=diverged,
        max_abs_value=float(np.max(np.abs(field.values))),
        wall_time=time.perf_counter() - start,
    )
    return field, report
