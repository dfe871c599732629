"""Tridiagonal matrices stored as three diagonals, with a Thomas solver."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularSystem

PIVOT_TOL = 1e-14


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Row i holds ``lower[i]`` (column i-1), ``diag[i]`` and ``upper[i]`` (column i+1).

    ``lower[0]`` and ``upper[-1]`` fall outside the matrix and are kept at zero.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        if len(self.lower) != n or len(self.upper) != n:
            raise ValueError("diagonals must have equal length")
        self.lower[0] = 0.0
        self.upper[-1] = 0.0

    @property
    def n(self) -> int:
        return len(self.diag)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[1:] += self.lower[1:] * v[:-1]
        out[:-1] += self.upper[:-1] * v[1:]
        return out

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.lower[1:], -1) + np.diag(self.upper[:-1], 1)

    def scaled_sum(self, other: "TridiagonalMatrix", s: float) -> "TridiagonalMatrix":
        """self + s * other."""
        return TridiagonalMatrix(
            self.lower + s * other.lower,
            self.diag + s * other.diag,
            self.upper + s * other.upper,
        )

    def with_identity_rows(self, rows) -> "TridiagonalMatrix":
        lower, diag, upper = self.lower.copy(), self.diag.copy(), self.upper.copy()
        for i in rows:
            lower[i] = 0.0
            diag[i] = 1.0
            upper[i] = 0.0
        return TridiagonalMatrix(lower, diag, upper)

    def factor(self) -> "ThomasFactors":
        """Forward-elimination factors, reusable for many right-hand sides."""
        n = self.n
        pivots = np.empty(n)
        ratio = np.empty(n)  # upper[i] / pivot[i]
        pivots[0] = self.diag[0]
        for i in range(n):
            if i > 0:
                pivots[i] = self.diag[i] - self.lower[i] * ratio[i - 1]
            if abs(pivots[i]) < PIVOT_TOL:
                raise SingularSystem(f"pivot {pivots[i]:.3e} at row {i}")
            ratio[i] = self.upper[i] / pivots[i]
        return ThomasFactors(tuple(self.lower.tolist()), tuple(pivots.tolist()), tuple(ratio.tolist()))

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return self.factor().solve(rhs)


@dataclass(frozen=True)
class ThomasFactors:
    # plain floats keep the scalar substitution loops cheap
    lower: tuple
    pivots: tuple
    ratio: tuple

    def solve(self, rhs) -> np.ndarray:
        low, piv, rat = self.lower, self.pivots, self.ratio
        d = np.asarray(rhs, dtype=float).tolist()
        n = len(piv)
        y = [0.0] * n
        y[0] = d[0] / piv[0]
        for i in range(1, n):
            y[i] = (d[i] - low[i] * y[i - 1]) / piv[i]
        for i in range(n - 2, -1, -1):
            y[i] -= rat[i] * y[i + 1]
        return np.array(y)
