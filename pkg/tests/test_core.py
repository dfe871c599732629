import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracdiff import FractionalOrder, Grid, ProblemSpec, validate
from fracdiff.core import evaluate
from fracdiff.errors import (
    DegenerateGrid,
    MissingInitialRate,
    NonPositiveDiffusivity,
    OrderOutOfRange,
)

from conftest import reference_problem


def test_reference_setup_validates():
    spec = ProblemSpec(FractionalOrder(1.0), 1.0, Grid(1.0, 10, 1.0, 10), p0=0.0, g0=40.0, gL=20.0)
    assert validate(spec) is spec


@pytest.mark.parametrize("alpha", [0.0, -0.5, 2.5, float("nan")])
def test_order_out_of_range(alpha):
    with pytest.raises(OrderOutOfRange):
        validate(reference_problem(alpha))


def test_missing_initial_rate():
    with pytest.raises(MissingInitialRate):
        validate(reference_problem(1.5, p1=None))
    # not needed for alpha <= 1
    validate(reference_problem(1.0, p1=None))


@pytest.mark.parametrize("k", [0.0, -1.0])
def test_non_positive_diffusivity(k):
    spec = ProblemSpec(FractionalOrder(0.5), k, Grid(1.0, 10, 1.0, 10), p0=0.0, g0=0.0, gL=0.0)
    with pytest.raises(NonPositiveDiffusivity):
        validate(spec)


@pytest.mark.parametrize("N, F", [(1, 10), (10, 0)])
def test_degenerate_grid(N, F):
    with pytest.raises(DegenerateGrid):
        validate(reference_problem(0.5, N=N, F=F))


def test_n_ic_dense_sample():
    for a in np.linspace(1e-6, 1.0, 1001):
        assert FractionalOrder(float(a)).n_ic == 1
    for a in np.linspace(1.0 + 1e-9, 2.0, 1001):
        assert FractionalOrder(float(a)).n_ic == 2


@given(st.floats(0.01, 2.0), st.integers(2, 100), st.integers(1, 100))
def test_validate_idempotent(alpha, N, F):
    spec = reference_problem(alpha, N=N, F=F)
    assert validate(validate(spec)) == validate(spec)


def test_grid_nodes():
    g = Grid(2.0, 4, 1.0, 5)
    np.testing.assert_allclose(g.x, [0, 0.5, 1.0, 1.5, 2.0])
    np.testing.assert_allclose(g.t, np.arange(6) * 0.2)
    assert g.h == 0.5 and g.dt == 0.2


def test_grid_from_dt_keeps_step():
    g = Grid.from_dt(1.0, 10, 1.0, 0.3)
    assert g.dt == pytest.approx(0.3) and g.F == 4
    assert Grid.from_dt(1.0, 10, 1.0, 0.25).F == 4


def test_evaluate_broadcasts_constants():
    x = np.linspace(0, 1, 5)
    np.testing.assert_array_equal(evaluate(3.0, x), np.full(5, 3.0))
    np.testing.assert_array_equal(evaluate(lambda v: 0, x), np.zeros(5))
    np.testing.assert_allclose(evaluate(lambda v: v * v, x), x * x)
