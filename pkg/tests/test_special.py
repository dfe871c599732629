import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracdiff.errors import PoleArgument
from fracdiff.special import gamma, recip_gamma


@pytest.mark.parametrize(
    "x, expected",
    [(1.0, 1.0), (0.5, 1.7724538509055159), (-0.5, -3.5449077018110318)],
)
def test_gamma_examples(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -7.0, -3.0 + 1e-13])
def test_gamma_rejects_poles(x):
    with pytest.raises(PoleArgument):
        gamma(x)


@pytest.mark.parametrize("x", [0.0, -1.0, -5.0, -2.0 - 5e-13])
def test_recip_gamma_vanishes_at_poles(x):
    assert recip_gamma(x) == 0.0


def test_recip_gamma_half_integer():
    # 1/Gamma(5/2) = 1/(3/2 * 1/2 * sqrt(pi))
    direct = 1.0 / (1.5 * 0.5 * math.sqrt(math.pi))
    assert recip_gamma(2.5) == pytest.approx(direct, rel=1e-15)
    assert recip_gamma(2.5) == pytest.approx(0.7522527780636751, rel=1e-15)


def test_gamma_accuracy_against_mpmath():
    xs = np.linspace(-9.995, 30.0, 3001)
    xs = xs[np.abs(xs - np.round(xs)) > 1e-6]
    with mpmath.workdps(30):
        worst = max(abs(gamma(x) / float(mpmath.gamma(x)) - 1.0) for x in xs)
    assert worst <= 1e-12


def test_recip_gamma_far_from_the_contract_range():
    assert recip_gamma(200.0) == 0.0
    with mpmath.workdps(30):
        assert recip_gamma(-170.5) == pytest.approx(float(1 / mpmath.gamma(-170.5)), rel=1e-10)
    assert recip_gamma(-200.5) == -math.inf


@given(st.floats(0.1, 20.0))
def test_recurrence(x):
    assert gamma(x + 1) == pytest.approx(x * gamma(x), rel=1e-10)


@given(st.floats(-4.99, 4.99).filter(lambda x: abs(x - round(x)) > 1e-3))
def test_reflection(x):
    assert gamma(x) * gamma(1 - x) == pytest.approx(math.pi / math.sin(math.pi * x), rel=1e-10)


@given(st.floats(-9.9, 30.0).filter(lambda x: abs(x - round(x)) > 1e-6 or x > 0.5))
def test_reciprocal_consistency(x):
    assert recip_gamma(x) * gamma(x) == pytest.approx(1.0, abs=1e-10)
