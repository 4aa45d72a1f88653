import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmgl.errors import ConvergenceError, PoleError
from fmgl.special import (
    MLQuery,
    euler_limit_gamma,
    gamma,
    mittag_leffler,
    mittag_leffler_result,
    ml_reflection,
    ml_series,
    recip_gamma,
)


def _rel(a, b):
    return abs(a - b) / abs(b)


# {{{ gamma


def test_gamma_examples():
    assert gamma(1.0) == 1.0
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    # reflection from gamma(0.5): gamma(-0.5) = -2 sqrt(pi)
    assert gamma(-0.5) == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -3.0, -7.0 + 5e-13])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        gamma(x)


def test_gamma_against_mpmath():
    for x in np.linspace(-4.95, 6.0, 211):
        if abs(x - round(x)) < 1e-9 and x <= 0:
            continue
        assert _rel(gamma(x), float(mpmath.gamma(x))) < 1e-13, x


def test_gamma_recurrence_on_grid():
    for x in np.arange(1, 500) * 0.01:
        assert _rel(gamma(x + 1), x * gamma(x)) <= 1e-12, x


@given(
    st.floats(-5.0, 5.0).filter(
        lambda x: abs(x) > 1e-300 and (x > 0 or abs(x - round(x)) > 1e-6)
    )
)
def test_gamma_times_recip_is_one(x):
    assert _rel(gamma(x) * recip_gamma(x), 1.0) <= 1e-12


@given(st.floats(0.05, 0.95))
def test_gamma_reflection(x):
    lhs = gamma(x) * gamma(1.0 - x)
    assert _rel(lhs, math.pi / math.sin(math.pi * x)) <= 1e-12


def test_recip_gamma_examples():
    assert recip_gamma(0.0) == 0.0
    assert recip_gamma(-3.0) == 0.0
    assert recip_gamma(2.0) == 1.0


def test_gamma_near_zero_overflows_to_infinity():
    assert gamma(2.2e-309) == math.inf
    assert recip_gamma(2.2e-309) == 2.2e-309


def test_recip_gamma_large_argument_underflows_smoothly():
    assert recip_gamma(200.0) == pytest.approx(float(mpmath.rgamma(200)), rel=1e-12)
    assert recip_gamma(400.0) == 0.0 or recip_gamma(400.0) < 1e-300


@pytest.mark.parametrize("x", [0.3, 0.5, 1.7])
def test_euler_limit_cross_check(x):
    assert _rel(euler_limit_gamma(x, 10**6), gamma(x)) <= 1e-4


# }}}


# {{{ mittag-leffler


def test_ml_examples():
    assert mittag_leffler(1.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-15)
    assert mittag_leffler(2.0, 1.0, -math.pi**2) == pytest.approx(-1.0, abs=1e-12)
    assert mittag_leffler(2.0, 2.0, -4.0) == pytest.approx(math.sin(2.0) / 2.0, abs=1e-14)


@pytest.mark.parametrize(
    ("alpha", "beta", "z"),
    [(2.0, 0.5, -900.0), (2.0, 1.5, -900.0), (2.0, -0.5, -30.0), (1.0, 0.5, 2.0),
     (0.5, 1.0, 1.5), (1.5, 0.7, -3.0), (2.0, 1.3, -60.0)],
)
def test_ml_against_mpmath(alpha, beta, z):
    mpmath.mp.dps = 50
    ref = mpmath.nsum(lambda k: mpmath.mpf(z) ** k * mpmath.rgamma(alpha * k + beta), [0, mpmath.inf])
    mpmath.mp.dps = 15
    assert mittag_leffler(alpha, beta, z) == pytest.approx(float(ref), abs=1e-10)


@settings(max_examples=200)
@given(st.floats(0.5, 20.0))
def test_ml_cos_and_sinc(x):
    assert abs(mittag_leffler(2.0, 1.0, -x * x) - math.cos(x)) <= 1e-9
    assert abs(mittag_leffler(2.0, 2.0, -x * x) - math.sin(x) / x) <= 1e-9


@given(st.floats(-5.0, 5.0))
def test_ml_exp(z):
    assert _rel(mittag_leffler(1.0, 1.0, z), math.exp(z)) <= 1e-10


@pytest.mark.parametrize("beta", [1.0, 2.0, 0.5, 1.5, -0.3])
def test_ml_reflection_matches_series_in_overlap(beta):
    for z in np.linspace(-100.0, -25.0, 16):
        x = math.sqrt(-z)
        series = ml_series(MLQuery(2.0, beta, z, 1e-16))
        refl = ml_reflection(beta, x)
        tol = 1e-9 + series.error + refl.error
        assert abs(series.value - refl.value) <= tol, (beta, z)


def test_ml_large_argument_takes_reflection():
    res = mittag_leffler_result(MLQuery(2.0, 1.0, -900.0, 1e-16))
    assert res.method == "reflection"
    assert res.value == pytest.approx(math.cos(30.0), abs=1e-12)


def test_ml_query_validation():
    with pytest.raises(ValueError):
        MLQuery(0.0, 1.0, 1.0, 1e-16)
    with pytest.raises(ValueError):
        MLQuery(1.0, 1.0, 1.0, 0.0)


def test_ml_term_cap_reports_non_convergence():
    from fmgl.config import MittagLefflerConfig

    with pytest.raises(ConvergenceError):
        mittag_leffler(0.5, 1.0, -40.0, config=MittagLefflerConfig(term_cap=50))


# }}}
