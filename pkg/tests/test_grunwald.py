import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmgl.closed_forms import classical_sin, d_sin
from fmgl.errors import DegenerateError
from fmgl.functions import combine, constant, cosine, exponential, fourier, polynomial, power, scale, sine
from fmgl.grunwald import (
    FracOrder,
    GridSpec,
    classical_gl_derivative,
    estimate_convergence_order,
    fm_gl_derivative,
    fm_gl_derivative_series,
    grunwald_weights,
)

alphas = st.floats(0.01, 2.99).filter(lambda a: abs(a - round(a)) > 1e-3)


def _condition_scale(alpha: float, grid: GridSpec, magnitude: float) -> float:
    # rounding in the samples is amplified by h^-alpha sum |w_k|
    return grid.h**-alpha * float(np.sum(np.abs(grunwald_weights(alpha, grid.N).w))) * magnitude


def _binom_product(a: float, n: int) -> float:
    # (-1)^n binom(a, n) from the product formula, independent of the recurrence
    p = 1.0
    for j in range(n):
        p *= (a - j) / (j + 1)
    return (-1) ** n * p


# {{{ types


def test_frac_order_bracket():
    assert FracOrder(0.5).m == 1
    assert FracOrder(1.5).m == 2
    assert FracOrder(1.0).m == 2
    assert FracOrder(0.0).m == 1
    assert FracOrder(1.0).is_integer and not FracOrder(0.3).is_integer
    with pytest.raises(ValueError):
        FracOrder(-0.1)


def test_grid_spec():
    g = GridSpec(30.0, 3000)
    assert g.h == 30.0 / 3000
    with pytest.raises(ValueError):
        GridSpec(0.0, 10)
    with pytest.raises(ValueError):
        GridSpec(1.0, 0)
    with pytest.raises(ValueError):
        GridSpec(1.0, 3).check_order(FracOrder(1.5))


# }}}


# {{{ weights


def test_weights_examples():
    np.testing.assert_array_equal(grunwald_weights(0.5, 3).w, [1.0, -0.5, -0.125, -0.0625])
    np.testing.assert_array_equal(grunwald_weights(1.0, 4).w, [1.0, -1.0, 0.0, 0.0, 0.0])
    np.testing.assert_array_equal(grunwald_weights(0.0, 2).w, [1.0, 0.0, 0.0])


def test_weights_match_exact_rational_product():
    a = Fraction(3, 7)
    w = grunwald_weights(float(a), 30).w
    exact = Fraction(1)
    for k in range(1, 31):
        exact *= (k - 1 - a) / k
        assert w[k] == pytest.approx(float(exact), rel=1e-13)


@given(st.integers(0, 4), st.integers(1, 40))
def test_integer_order_weights_vanish(m, N):
    w = grunwald_weights(float(m), N).w
    assert np.all(w[m + 1 :] == 0.0)


@settings(max_examples=50)
@given(st.floats(0.001, 2.999))
def test_weights_partial_sum_identity(alpha):
    w = grunwald_weights(alpha, 64).w
    partial = np.cumsum(w)
    # each weight carries about k ulps from the recurrence; for alpha > 1 the
    # sum is much smaller than its terms, so that rounding sets the floor
    floor = 65 * np.finfo(float).eps * np.cumsum(np.abs(w))
    for n in range(65):
        ref = _binom_product(alpha - 1.0, n)
        assert abs(partial[n] - ref) <= 1e-12 * abs(ref) + floor[n], n


def test_weights_are_read_only():
    w = grunwald_weights(0.5, 8).w
    with pytest.raises(ValueError):
        w[0] = 2.0


# }}}


# {{{ fixed memory operator


def test_fm_constant_example():
    v = fm_gl_derivative(constant(1.0), 0.0, 0.5, GridSpec(1.0, 4096))
    assert abs(v - 1.0 / math.sqrt(math.pi)) <= 1e-3


@pytest.mark.parametrize("L,N", [(1.0, 8), (3.0, 64), (6.0, 768)])
def test_fm_first_order_linear_is_exact(L, N):
    assert fm_gl_derivative(power(1), 5.0, 1.0, GridSpec(L, N)) == 1.0


@given(st.floats(-10.0, 10.0), st.integers(3, 500), st.floats(0.1, 20.0))
def test_integer_order_reduction(t, N, L):
    f = sine()
    g = GridSpec(L, N)
    h = g.h
    assert fm_gl_derivative(f, t, 1.0, g) == (f(t) - f(t - 1.0 * h)) / h
    assert fm_gl_derivative(f, t, 0.0, g) == f(t)


@settings(max_examples=50)
@given(
    alphas,
    st.floats(-3.0, 3.0),
    st.floats(-3.0, 3.0),
    st.floats(0.0, 5.0),
)
def test_linearity(alpha, a, b, t):
    f, g = sine(), exponential(rate=-0.5)
    grid = GridSpec(4.0, 512)
    lhs = fm_gl_derivative(combine(scale(f, a), scale(g, b)), t, alpha, grid)
    df, dg = fm_gl_derivative(f, t, alpha, grid), fm_gl_derivative(g, t, alpha, grid)
    magnitude = (abs(a) + abs(b)) * math.exp(0.5 * 4.0) + 1e-300
    assert abs(lhs - (a * df + b * dg)) <= 1e-12 * _condition_scale(alpha, grid, magnitude)


@settings(max_examples=50)
@given(alphas, st.integers(-64, 64), st.integers(0, 64))
def test_shift_equivariance(alpha, shift_steps, t_steps):
    # dyadic L and N make t, s and the sample points exact binary fractions
    grid = GridSpec(4.0, 256)
    s = shift_steps * grid.h
    t = t_steps * grid.h
    f = polynomial(0.5, -1.0, 0.25, 0.125)

    class Shifted:
        def __call__(self, x):
            return f(x + s)

    assert fm_gl_derivative(Shifted(), t, alpha, grid) == fm_gl_derivative(f, t + s, alpha, grid)


@pytest.mark.parametrize("f", [sine(), fourier(sin=(1.0, 0.0, -0.3), cos=(0.2, 0.5, 0.0))])
@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.9, 1.5, 1.9])
def test_series_discrete_periodicity(f, alpha):
    N = 2000
    L = 10 * math.pi  # T = 2 pi = 400 h
    grid = GridSpec(L, N)
    series = fm_gl_derivative_series(f, 0.0, 6 * math.pi, alpha, grid)
    p = 400
    v = series.states
    defect = np.max(np.abs(v[p:] - v[:-p]))
    if alpha <= 0.5:
        assert defect <= 1e-13 * max(1.0, np.max(np.abs(v)))
    # samples t and t + 2 pi agree only to rounding, which the sum amplifies
    assert defect <= 1e-14 * _condition_scale(alpha, grid, 2.0)


def test_series_matches_pointwise_operator():
    grid = GridSpec(5.0, 500)
    series = fm_gl_derivative_series(cosine(), 1.0, 3.0, 0.7, grid)
    for t, v in zip(series.times[::37], series.states[::37]):
        assert v == pytest.approx(fm_gl_derivative(cosine(), t, 0.7, grid), rel=1e-12, abs=1e-13)


def test_series_of_constant_is_constant():
    series = fm_gl_derivative_series(constant(3.0), 0.0, 5.0, 0.4, GridSpec(2.0, 200))
    assert np.ptp(series.states) <= 1e-13


def test_sin_series_first_order_error_model():
    # leading GL truncation term: discrete - exact = -(alpha h / 2) D^{alpha+1} f + O(h^2)
    alpha, L, N = 0.5, 30.0, 3000
    grid = GridSpec(L, N)
    series = fm_gl_derivative_series(sine(), 0.0, 12.566, alpha, grid)
    exact = d_sin(series.times, alpha, L)
    err = series.states - exact
    predicted = -alpha * grid.h / 2 * d_sin(series.times, alpha + 1, L)
    residual = np.max(np.abs(err - predicted))
    assert residual <= 2e-5
    assert residual <= 0.01 * np.max(np.abs(predicted))
    # so the pointwise error is essentially alpha h / 2 = 2.5e-3 at this grid
    assert 2.4e-3 <= np.max(np.abs(err)) <= alpha * grid.h / 2 * 1.01


def test_sin_converges_first_order_in_h():
    values = [(30.0 / n, fm_gl_derivative(sine(), 2.0, 0.5, GridSpec(30.0, n))) for n in (500, 1000, 2000)]
    assert abs(estimate_convergence_order(values) - 1.0) <= 0.2


def test_constant_rule_convergence():
    target = 1.0 / math.sqrt(math.pi)
    Ns = [2**k for k in range(8, 14)]
    errs = [abs(fm_gl_derivative(constant(1.0), 0.0, 0.5, GridSpec(1.0, N)) - target) for N in Ns]
    c = max(e * N for e, N in zip(errs, Ns))
    # a single constant bounds every error: |value(N) - target| <= c / N
    assert all(e <= c / N for e, N in zip(errs, Ns))
    assert c <= 2.0 * min(e * N for e, N in zip(errs, Ns))


# }}}


# {{{ classical operator


def test_classical_linear_first_order():
    assert classical_gl_derivative(power(1), 3.0, 1.0, 0.0, 64) == pytest.approx(1.0, abs=1e-13)


def test_classical_sin_matches_mittag_leffler_form():
    for t in np.linspace(0.5, 35.0, 15):
        v = classical_gl_derivative(sine(), t, 0.5, 0.0, 8192)
        assert abs(v - classical_sin(t, 0.5)) <= 5e-3, t


def test_classical_sin_is_only_asymptotically_periodic():
    t = 30.0
    a = classical_gl_derivative(sine(), t, 0.5, 0.0, 8192)
    b = classical_gl_derivative(sine(), t + 2 * math.pi, 0.5, 0.0, 8192)
    assert abs(a - b) < 1e-2
    assert abs(a - math.sin(t + math.pi / 4)) < 2e-2
    assert abs(b - math.sin(t + 2 * math.pi + math.pi / 4)) < 2e-2
    assert a != b


def test_classical_requires_t_after_terminal():
    with pytest.raises(ValueError):
        classical_gl_derivative(sine(), 0.0, 0.5, 1.0, 10)


# }}}


# {{{ convergence order estimator


def test_order_of_exact_first_and_second_order_data():
    hs = [0.1, 0.05, 0.025]
    assert estimate_convergence_order([(h, 3.0 + 2.0 * h) for h in hs]) == pytest.approx(1.0, abs=1e-9)
    assert estimate_convergence_order([(h, 3.0 + 2.0 * h * h) for h in hs]) == pytest.approx(2.0, abs=1e-9)


def test_order_degenerate_when_converged():
    with pytest.raises(DegenerateError):
        estimate_convergence_order([(0.1, 1.0), (0.05, 1.0), (0.025, 1.0)])


def test_order_requires_halving():
    with pytest.raises(ValueError):
        estimate_convergence_order([(0.1, 1.0), (0.07, 1.1), (0.025, 1.3)])


# }}}
