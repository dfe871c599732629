"""Implicit Galerkin scheme with piecewise-linear elements.

The semi-discrete system ``K u + M D_t^alpha u = b`` is stepped with the
Grünwald-Letnikov derivative, giving one tridiagonal solve per level:

    (M + dt^a K) u^f = M (h^f + c^f) + dt^a b^f,

where ``h^f`` collects the weighted history of earlier levels and ``c^f`` the
initial-value correction. The first and last rows are replaced by identity
rows carrying the Dirichlet values.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .caputo import initial_correction
from .core import (
    ExplicitDt,
    ProblemSpec,
    Scheme,
    SolutionField,
    SolverReport,
    blew_up,
    validate,
)
from .errors import Diverged, IndexOutOfRange
from .fdm import nodal_initial_data, resolve_grid, seed_initial_levels
from .tridiag import ThomasFactors, TridiagonalMatrix
from .weights import GlWeights, compute_weights


@dataclass(frozen=True)
class FemOptions:
    dt_policy: Optional[ExplicitDt] = None


@dataclass
class FemState:
    """Assembled operators plus the levels computed so far.

    ``values`` is preallocated for every level; only ``values[:filled]`` is valid.
    """

    K: TridiagonalMatrix
    M: TridiagonalMatrix
    weights: GlWeights
    values: np.ndarray
    lhs: ThomasFactors
    filled: int = 0


def stiffness_matrix(N: int, h: float, k_alpha: float) -> TridiagonalMatrix:
    # element matrix (k/h) [[1, -1], [-1, 1]]
    e = k_alpha / h
    diag = np.full(N + 1, 2.0 * e)
    diag[0] = diag[-1] = e
    off = np.full(N + 1, -e)
    return TridiagonalMatrix(off.copy(), diag, off.copy())


def mass_matrix(N: int, h: float) -> TridiagonalMatrix:
    # element matrix (h/6) [[2, 1], [1, 2]]
    diag = np.full(N + 1, 2.0 * h / 3.0)
    diag[0] = diag[-1] = h / 3.0
    off = np.full(N + 1, h / 6.0)
    return TridiagonalMatrix(off.copy(), diag, off.copy())


def system_matrix(K: TridiagonalMatrix, M: TridiagonalMatrix, dt_a: float) -> TridiagonalMatrix:
    """M + dt^a K with Dirichlet identity rows at both ends."""
    return M.scaled_sum(K, dt_a).with_identity_rows((0, M.n - 1))


def assemble(spec: ProblemSpec) -> FemState:
    g = spec.grid
    K = stiffness_matrix(g.N, g.h, spec.k_alpha)
    M = mass_matrix(g.N, g.h)
    lhs = system_matrix(K, M, g.dt**spec.alpha).factor()
    return FemState(
        K=K,
        M=M,
        weights=compute_weights(spec.alpha, g.dt, g.F),
        values=np.empty((g.F + 1, g.N + 1)),
        lhs=lhs,
    )


def load_vector(spec: ProblemSpec, f: int) -> np.ndarray:
    """b^f before the Dirichlet rows are imposed; the equation carries no source."""
    return np.zeros(spec.grid.N + 1)


def history_vector(state: FemState, f: int) -> np.ndarray:
    """-dt^a * sum_{j=1}^{f} c_j u^{f-j}."""
    if f < 1 or f > state.filled:
        raise IndexOutOfRange(f"history at level {f} needs levels 0..{f - 1}, have {state.filled}")
    w = state.weights
    jmax = min(f, w.support - 1)
    # rows f-jmax .. f-1 pair with c_jmax .. c_1
    acc = w.c[jmax:0:-1] @ state.values[f - jmax : f]
    return -(w.dt**w.alpha) * acc


def ic_vector(spec: ProblemSpec, f: int, init=None) -> np.ndarray:
    """dt^a * sum_k t_f^(k-a) / Gamma(k-a+1) * p_k at every node."""
    g = spec.grid
    if init is None:
        init = nodal_initial_data(spec)
    corr = initial_correction(spec.alpha, f * g.dt, init)
    return g.dt**spec.alpha * np.broadcast_to(corr, (g.N + 1,)).astype(float)


def step_fem(state: FemState, spec: ProblemSpec, f: int, init=None) -> np.ndarray:
    """Solve for level f and store it in ``state``."""
    g = spec.grid
    dt_a = g.dt**spec.alpha
    rhs = state.M.matvec(history_vector(state, f) + ic_vector(spec, f, init))
    rhs += dt_a * load_vector(spec, f)
    rhs[0], rhs[-1] = (float(v) for v in spec.boundary_values(f * g.dt))
    u = state.lhs.solve(rhs)
    state.values[f] = u
    state.filled = f + 1
    if blew_up(u):
        raise Diverged(f"implicit scheme diverged at level {f}", level=f, values=u)
    return u


def solve_fem(spec: ProblemSpec, options: FemOptions = FemOptions()) -> tuple[SolutionField, SolverReport]:
    start = time.perf_counter()
    validate(spec)
    spec = spec.with_grid(resolve_grid(spec, options.dt_policy))
    g = spec.grid
    state = assemble(spec)
    seeds = seed_initial_levels(spec)
    state.values[: len(seeds)] = seeds
    state.filled = len(seeds)
    init = nodal_initial_data(spec)
    diverged = blew_up(seeds)
    if not diverged:
        for f in range(len(seeds), g.F + 1):
            try:
                step_fem(state, spec, f, init)
            except Diverged:
                diverged = True
                break

    field = SolutionField(grid=g, values=state.values[: state.filled].copy())
    report = SolverReport(
        scheme=Scheme.FEM_IMPLICIT,
        stability_dt_max=None,
        diverged=diverged,
        max_abs_value=float(np.max(np.abs(field.values))),
        wall_time=time.perf_counter() - start,
    )
    return field, report
