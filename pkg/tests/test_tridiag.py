import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracdiff.errors import SingularSystem
from fracdiff.tridiag import TridiagonalMatrix


def random_dominant(n, rng):
    lower, upper = rng.normal(size=(2, n))
    diag = np.abs(lower) + np.abs(upper) + 1.0 + rng.random(n)
    return TridiagonalMatrix(lower, diag, upper)


@settings(deadline=None)
@given(st.integers(2, 60), st.integers(0, 2**31 - 1))
def test_solve_matches_dense(n, seed):
    rng = np.random.default_rng(seed)
    A = random_dominant(n, rng)
    b = rng.normal(size=n)
    np.testing.assert_allclose(A.solve(b), np.linalg.solve(A.to_dense(), b), rtol=1e-10, atol=1e-12)


def test_matvec_matches_dense():
    rng = np.random.default_rng(1)
    A = random_dominant(9, rng)
    v = rng.normal(size=9)
    np.testing.assert_allclose(A.matvec(v), A.to_dense() @ v, rtol=1e-14)


def test_out_of_matrix_entries_are_zeroed():
    A = TridiagonalMatrix(np.ones(3), np.full(3, 4.0), np.ones(3))
    assert A.lower[0] == 0 and A.upper[-1] == 0


def test_factors_are_reusable():
    rng = np.random.default_rng(2)
    A = random_dominant(12, rng)
    fac = A.factor()
    for _ in range(3):
        b = rng.normal(size=12)
        np.testing.assert_allclose(fac.solve(b), np.linalg.solve(A.to_dense(), b), rtol=1e-12)


def test_zero_pivot_detected():
    A = TridiagonalMatrix(np.zeros(3), np.array([1.0, 0.0, 1.0]), np.zeros(3))
    with pytest.raises(SingularSystem):
        A.factor()
    # singular only after elimination: [[1, 1], [1, 1]]
    B = TridiagonalMatrix(np.ones(2), np.ones(2), np.ones(2))
    with pytest.raises(SingularSystem):
        B.solve(np.ones(2))


def test_identity_rows():
    A = TridiagonalMatrix(np.ones(4), np.full(4, 3.0), np.ones(4)).with_identity_rows((0, 3))
    dense = A.to_dense()
    np.testing.assert_array_equal(dense[0], [1, 0, 0, 0])
    np.testing.assert_array_equal(dense[3], [0, 0, 0, 1])
