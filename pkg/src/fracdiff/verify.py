"""Closed-form oracles and convergence studies.

The oracles here never call solver code: analytic derivatives use only
:mod:`fracdiff.special`, profiles and series are plain arithmetic, and the
direct binomial weights are computed with mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import mpmath
import numpy as np

from .caputo import InitialData, discrete_caputo
from .core import FractionalOrder, Grid, ProblemSpec, SolutionField
from .errors import InvalidPower, NonConstantBCs, UnstableMember
from .special import gamma, recip_gamma
from .weights import compute_weights


@dataclass(frozen=True)
class ConvergenceRecord:
    dts: tuple
    errors: tuple
    empirical_order: float = field(init=False)

    def __post_init__(self):
        if len(self.dts) != len(self.errors) or len(self.dts) < 3:
            raise ValueError("need at least three (dt, error) pairs of equal length")
        object.__setattr__(self, "empirical_order", fitted_order(self.dts, self.errors))

    @property
    def monotone(self) -> bool:
        """Errors shrink with every refinement of dt."""
        order = np.argsort(self.dts)[::-1]
        errs = np.asarray(self.errors)[order]
        return bool(np.all(np.diff(errs) < 0))


def fitted_order(dts: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(dt)."""
    slope, _ = np.polyfit(np.log(np.asarray(dts)), np.log(np.asarray(errors)), 1)
    return float(slope)


def analytic_caputo_power(q: int, alpha: float, t: float) -> float:
    """Caputo derivative of t^q: Gamma(q+1)/Gamma(q+1-alpha) * t^(q-alpha)."""
    if int(q) != q or q < FractionalOrder(alpha).n_ic:
        raise InvalidPower(f"t^{q} has no Caputo power-law derivative of order {alpha}")
    return gamma(q + 1) * recip_gamma(q + 1 - alpha) * t ** (q - alpha)


def direct_gl_weight(alpha: float, j: int, dt: float = 1.0) -> float:
    """dt^-alpha * (-1)^j * binom(alpha, j) evaluated in 40-digit arithmetic."""
    with mpmath.workdps(40):
        a = mpmath.mpf(alpha)
        return float((-1) ** j * mpmath.binomial(a, j) * mpmath.mpf(dt) ** (-a))


def direct_gl_weights(alpha: float, J: int, dt: float = 1.0) -> np.ndarray:
    """:func:`direct_gl_weight` for j = 0..J, each binomial computed independently."""
    with mpmath.workdps(40):
        a = mpmath.mpf(alpha)
        scale = mpmath.mpf(dt) ** (-a)
        return np.array([float((-1) ** j * mpmath.binomial(a, j) * scale) for j in range(J + 1)])


def steady_state_profile(spec: ProblemSpec) -> np.ndarray:
    """Linear interpolation between the two (time-constant) boundary values."""
    g = spec.grid
    left, right = spec.boundary_values(g.t)
    if np.ptp(left) > 0 or np.ptp(right) > 0:
        raise NonConstantBCs("steady state needs boundary data that is constant in time")
    g0, gL = float(left[0]), float(right[0])
    return g0 + (gL - g0) * g.x / g.L


def overshoot_metric(series, target: float) -> float:
    """Largest excursion of ``series`` above ``target``; 0 if it never exceeds it."""
    return max(0.0, float(np.max(np.asarray(series, dtype=float) - target)))


def heat_series(x, t: float, g0: float, gL: float, L: float = 1.0, k: float = 1.0, terms: int = 50):
    """Classical heat equation, zero initial field, constant Dirichlet data, Fourier series."""
    x = np.asarray(x, dtype=float)
    u = g0 + (gL - g0) * x / L
    for n in range(1, terms + 1):
        b = -2.0 * (g0 - (-1) ** n * gL) / (n * math.pi)
        u = u + b * np.sin(n * math.pi * x / L) * math.exp(-k * (n * math.pi / L) ** 2 * t)
    return u


def convergence_study(
    error_at: Callable[[float], float],
    dts: Iterable[float],
    dt_bound: Optional[Callable[[float], float]] = None,
) -> ConvergenceRecord:
    """Measure ``error_at(dt)`` for every dt (coarse to fine) and fit the order.

    ``dt_bound(dt)`` gives the stability limit that applies to that member;
    members above it are rejected before anything runs.
    """
    dts = sorted(dts, reverse=True)
    if dt_bound is not None:
        for dt in dts:
            if dt > dt_bound(dt) * (1.0 + 1e-12):
                raise UnstableMember(f"dt={dt} exceeds the stability bound {dt_bound(dt)}")
    errors = [float(error_at(dt)) for dt in dts]
    return ConvergenceRecord(tuple(dts), tuple(errors))


def caputo_power_error(q: int, alpha: float, t: float = 1.0) -> Callable[[float], float]:
    """dt -> |discrete Caputo of t^q at t - exact value|, with the true initial data of t^q."""
    n_ic = FractionalOrder(alpha).n_ic
    # derivatives of t^q at 0: only the q-th is non-zero, and only if q < n_ic
    init = InitialData([math.factorial(q) if k == q else 0.0 for k in range(n_ic)])
    if q >= n_ic:
        exact = analytic_caputo_power(q, alpha, t)
    else:
        exact = 0.0  # integer derivative of order n_ic kills t^q

    def error(dt: float) -> float:
        f = round(t / dt)
        samples = (np.arange(f + 1) * dt) ** q
        w = compute_weights(alpha, dt, f)
        return abs(discrete_caputo(samples, init, w, f) - exact)

    return error


def heat_fdm_family(Ns: Sequence[int], safety: float = 0.8, T: float = 0.1, g0=40.0, gL=20.0):
    """alpha = 1 explicit runs refined with dt ~ h^2, measured against :func:`heat_series`.

    Returns ``(error_at, dts, dt_bound)`` for :func:`convergence_study`.
    """
    from .core import ExplicitDt
    from .fdm import FdmOptions, solve_fdm, stable_dt_max

    by_dt = {}
    for N in Ns:
        by_dt[safety * stable_dt_max(1.0 / N, 1.0, 1.0)] = N

    def error(dt: float) -> float:
        N = by_dt[dt]
        spec = ProblemSpec(FractionalOrder(1.0), 1.0, Grid(1.0, N, T, 1), p0=0.0, g0=g0, gL=gL)
        sol, _ = solve_fdm(spec, FdmOptions(ExplicitDt(dt)))
        x = sol.x[1:-1]
        return float(np.max(np.abs(sol.values[-1, 1:-1] - heat_series(x, sol.grid.T, g0, gL))))

    def bound(dt: float) -> float:
        return stable_dt_max(1.0 / by_dt[dt], 1.0, 1.0)

    return error, list(by_dt), bound


def probe_value(sol: SolutionField, x: float) -> float:
    return float(sol.trace(x)[-1])


def settled(trace, tail: float = 0.1, rel_tol: float = 1e-3) -> bool:
    """The last ``tail`` fraction of ``trace`` varies by less than ``rel_tol`` of its final value."""
    trace = np.asarray(trace)
    start = int(math.floor((1.0 - tail) * (len(trace) - 1)))
    window = trace[start:]
    return bool(np.ptp(window) < rel_tol * abs(window[-1]))


def settle(solve: Callable, spec: ProblemSpec, probe_x: float, T0: float = 1.0, T_cap: float = 64.0):
    """Double the final time from ``T0`` until the probe trace settles or ``T_cap`` is reached.

    ``solve(spec)`` must return ``(SolutionField, SolverReport)``. The time step of
    ``spec.grid`` is kept fixed while T grows.
    """
    dt = spec.grid.dt
    T = T0
    while True:
        grid = Grid.from_dt(spec.grid.L, spec.grid.N, T, dt)
        sol, report = solve(spec.with_grid(grid))
        if report.diverged or settled(sol.trace(probe_x)) or T >= T_cap:
            return sol, report
        T *= 2.0


def memory_window_study(spec: ProblemSpec, windows: Sequence[int], probe_x: float, dt_policy=None):
    """|probe value with truncated memory - probe value with full memory| for each window."""
    from .fdm import FdmOptions, solve_fdm

    full, _ = solve_fdm(spec, FdmOptions(dt_policy=dt_policy))
    ref = probe_value(full, probe_x)
    out = []
    for W in windows:
        sol, _ = solve_fdm(spec, FdmOptions(dt_policy=dt_policy, memory_window=W))
        out.append(abs(probe_value(sol, probe_x) - ref))
    return out


@dataclass(frozen=True)
class StudyResult:
    name: str
    passed: bool
    detail: str


def default_studies() -> list[StudyResult]:
    """The verification battery behind ``fracdiff verify``."""
    from .core import AutoDt
    from .fem import solve_fem
    from .fdm import stable_dt_max

    results = []

    worst = 0.0
    for alpha in (0.3, 0.75, 1.0, 1.5, 1.99):
        c = compute_weights(alpha, 1.0, 200).c
        for cj, d in zip(c, direct_gl_weights(alpha, 200)):
            worst = max(worst, abs(cj - d) if d == 0 else abs(cj - d) / abs(d))
    results.append(StudyResult("weights: recurrence vs binomial", bool(worst <= 1e-12), f"max rel err {worst:.2e}"))

    dts = [2.0**-k for k in range(6, 11)]
    for q, alpha in ((1, 0.5), (2, 0.5), (1, 1.5), (2, 1.5)):
        rec = convergence_study(caputo_power_error(q, alpha), dts)
        ok = rec.empirical_order >= 0.8 and rec.monotone
        results.append(
            StudyResult(f"caputo t^{q}, alpha={alpha}", ok, f"order {rec.empirical_order:.3f}")
        )

    error, hdts, bound = heat_fdm_family([10, 20, 40])
    rec = convergence_study(error, hdts, bound)
    results.append(
        StudyResult("fdm alpha=1 vs heat series", rec.empirical_order >= 0.8, f"order {rec.empirical_order:.3f}")
    )

    for alpha, lo, hi in ((0.75, None, 0.15), (1.75, 0.3, None)):
        spec = ProblemSpec(
            FractionalOrder(alpha), 1.0, Grid(1.0, 50, 10.0, 1000), p0=0.0, p1=0.0, g0=40.0, gL=20.0
        )
        sol, _ = solve_fem(spec)
        ov = overshoot_metric(sol.trace(0.5), 30.0)
        ok = (lo is None or ov >= lo) and (hi is None or ov <= hi)
        results.append(StudyResult(f"fem overshoot alpha={alpha}", ok, f"overshoot {ov:.4f}"))

    spec = ProblemSpec(FractionalOrder(0.75), 1.0, Grid(1.0, 10, 1.0, 1), p0=0.0, g0=40.0, gL=20.0)
    F = math.ceil(1.0 / (0.9 * stable_dt_max(0.1, 0.75, 1.0)))
    gaps = memory_window_study(spec, [F, F // 2, F // 4, F // 8], 0.5, AutoDt(0.9))
    ok = all(b >= a for a, b in zip(gaps, gaps[1:]))
    results.append(StudyResult("memory window discrepancy", ok, ", ".join(f"{g:.3e}" for g in gaps)))
    return results
