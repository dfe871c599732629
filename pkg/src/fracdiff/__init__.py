"""Numerical solvers for the 1-D time-fractional (Caputo) diffusion equation."""

from .caputo import InitialData, discrete_caputo, gl_sum, initial_correction
from .core import (
    AutoDt,
    ExplicitDt,
    FractionalOrder,
    Grid,
    ProblemSpec,
    Scheme,
    SolutionField,
    SolverReport,
    validate,
)
from .fdm import FdmOptions, solve_fdm, stable_dt_max
from .fem import FemOptions, solve_fem
from .special import gamma, recip_gamma
from .weights import GlWeights, compute_weights, weight_partial_sum

__all__ = [
    "AutoDt",
    "ExplicitDt",
    "FdmOptions",
    "FemOptions",
    "FractionalOrder",
    "GlWeights",
    "Grid",
    "InitialData",
    "ProblemSpec",
    "Scheme",
    "SolutionField",
    "SolverReport",
    "compute_weights",
    "discrete_caputo",
    "gamma",
    "gl_sum",
    "initial_correction",
    "recip_gamma",
    "solve_fdm",
    "solve_fem",
    "stable_dt_max",
    "validate",
    "weight_partial_sum",
]
