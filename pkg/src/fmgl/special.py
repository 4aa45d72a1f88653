r"""Gamma, reciprocal Gamma and the two-parameter Mittag-Leffler function.

The Mittag-Leffler function

.. math::

    E_{\alpha, \beta}(z) = \sum_{k = 0}^\infty \frac{z^k}{\Gamma(\alpha k + \beta)}

is summed directly with exactly rounded summation (:func:`math.fsum`). For
:math:`\alpha = 2` and large negative arguments the direct series loses all
accuracy to cancellation, so the expansion

.. math::

    E_{2, \beta}(-x^2) = x^{1 - \beta} \cos\left(x + (1 - \beta) \frac{\pi}{2}\right)
        + \sum_{k = 1}^\infty (-1)^{k + 1} \frac{x^{-2k}}{\Gamma(\beta - 2k)}

is used instead when its error estimate is smaller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fmgl.config import ML_CONFIG, MittagLefflerConfig
from fmgl.errors import ConvergenceError, PoleError

_EPS = 2.0**-52
_POLE_ATOL = 1.0e-12
# largest argument for which math.gamma does not overflow
_GAMMA_MAX = 171.6


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def _sinpi(x: float) -> float:
    """sin(pi x) with exact argument reduction, so integers give exact zeros."""
    r = math.fmod(x, 2.0)
    if r < 0.0:
        r += 2.0
    if r == 0.0 or r == 1.0:
        return 0.0
    if r > 1.0:
        return -_sinpi(r - 1.0)
    if r > 0.5:
        r = 1.0 - r
    return math.sin(math.pi * r)


def gamma(x: float) -> float:
    """Gamma function on the real line.

    Positive arguments use :func:`math.gamma`; negative ones go through the
    reflection identity :math:`\\Gamma(x)\\Gamma(1 - x) = \\pi / \\sin(\\pi x)`.

    :raises PoleError: if *x* is within ``1e-12`` of a non-positive integer.
    """
    x = float(x)
    if x <= 0.0 and abs(x - round(x)) <= _POLE_ATOL:
        raise PoleError(f"gamma has a pole at {round(x)} (x = {x!r})")

    if x > 0.0:
        if x > _GAMMA_MAX:
            return math.inf
        try:
            return math.gamma(x)
        except OverflowError:
            # x so close to 0 that 1/x is not representable
            return math.inf

    # NOTE: 1 - x > 1 here, so the positive branch applies
    g = gamma(1.0 - x)
    if math.isinf(g):
        return math.copysign(0.0, _sinpi(x))
    return math.pi / (_sinpi(x) * g)


def recip_gamma(x: float) -> float:
    """Reciprocal Gamma function, extended by zero at the poles of Gamma."""
    x = float(x)
    if _is_nonpositive_integer(x):
        return 0.0

    if x > 0.0:
        if x > _GAMMA_MAX:
            return math.exp(-math.lgamma(x))
        if x < 1.0e-8:
            return x / math.gamma(1.0 + x)
        return 1.0 / math.gamma(x)

    s = _sinpi(x)
    if 1.0 - x > _GAMMA_MAX:
        return math.copysign(math.exp(math.lgamma(1.0 - x)), s) * abs(s) / math.pi
    return s * math.gamma(1.0 - x) / math.pi


@dataclass(frozen=True)
class MLQuery:
    """Arguments of a single Mittag-Leffler evaluation."""

    alpha: float
    beta: float
    z: float
    tol: float = ML_CONFIG.default_tol

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive: {self.alpha!r}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive: {self.tol!r}")


@dataclass(frozen=True)
class MLResult:
    value: float
    #: rough bound on the absolute error
    error: float
    #: "series" or "reflection"
    method: str


def _series_term(k: int, alpha: float, beta: float, z: float, logz: float) -> float:
    arg = alpha * k + beta
    if _is_nonpositive_integer(arg):
        return 0.0
    if k == 0:
        return recip_gamma(arg)

    logmag = k * logz
    if arg < _GAMMA_MAX and logmag < 700.0:
        return z**k * recip_gamma(arg)

    rg = recip_gamma(arg) if arg < _GAMMA_MAX else 1.0
    sign = math.copysign(1.0, rg) * (-1.0 if (z < 0 and k % 2) else 1.0)
    return sign * math.exp(logmag - math.lgamma(arg))


def ml_series(q: MLQuery, config: MittagLefflerConfig = ML_CONFIG) -> MLResult:
    """Sum the defining power series of :math:`E_{\\alpha,\\beta}(z)` directly."""
    alpha, beta, z = q.alpha, q.beta, q.z
    if z == 0.0:
        return MLResult(recip_gamma(beta), _EPS, "series")

    logz = math.log(abs(z))
    terms = []
    largest = 0.0
    prev = math.inf
    small_run = 0
    for k in range(config.term_cap):
        t = _series_term(k, alpha, beta, z, logz)
        terms.append(t)
        a = abs(t)
        largest = max(largest, a)

        # only trust smallness once the terms are past their peak
        decreasing = alpha * k + beta > 0 and a <= prev
        prev = a
        if decreasing and a <= max(q.tol, _EPS * largest):
            small_run += 1
            if small_run >= 2:
                value = math.fsum(terms)
                return MLResult(value, 4.0 * _EPS * largest + q.tol, "series")
        else:
            small_run = 0

    raise ConvergenceError(
        f"Mittag-Leffler series E[{alpha}, {beta}]({z}) did not reach "
        f"tol={q.tol:g} within {config.term_cap} terms"
    )


def ml_reflection(beta: float, x: float, tol: float = ML_CONFIG.default_tol) -> MLResult:
    """Evaluate :math:`E_{2,\\beta}(-x^2)` for :math:`x > 0` by the
    oscillatory expansion, truncating the algebraic tail at its smallest term.
    """
    if not x > 0:
        raise ValueError(f"x must be positive: {x!r}")

    head = x ** (1.0 - beta) * math.cos(x + (1.0 - beta) * math.pi / 2.0)
    tail = []
    error = 0.0
    prev = math.inf
    x2 = x * x
    power = 1.0
    for k in range(1, 10000):
        power /= x2
        rg = recip_gamma(beta - 2.0 * k)
        t = (1.0 if k % 2 else -1.0) * power * rg
        a = abs(t)
        if rg == 0.0:
            # Gamma poles recur every step once beta - 2k hits one, so the
            # tail is exactly zero from here on
            if _is_nonpositive_integer(beta - 2.0 * (k + 1)):
                break
            continue
        if a > prev:
            # asymptotic series started diverging
            error = prev
            break
        tail.append(t)
        prev = a
        if a <= tol:
            error = a
            break

    value = head + math.fsum(tail)
    error += 4.0 * _EPS * max(abs(head), 1.0)
    return MLResult(value, error, "reflection")


def mittag_leffler_result(
    q: MLQuery, config: MittagLefflerConfig = ML_CONFIG
) -> MLResult:
    """Like :func:`mittag_leffler`, but also report the error estimate and
    which evaluation path was used.
    """
    if q.alpha != 2.0 or q.z > config.reflection_threshold:
        return ml_series(q, config)

    reflected = ml_reflection(q.beta, math.sqrt(-q.z), q.tol)
    try:
        direct = ml_series(q, config)
    except ConvergenceError:
        return reflected

    return reflected if reflected.error <= direct.error else direct


def mittag_leffler(
    alpha: float,
    beta: float,
    z: float,
    tol: float = ML_CONFIG.default_tol,
    config: MittagLefflerConfig = ML_CONFIG,
) -> float:
    """Two-parameter Mittag-Leffler function :math:`E_{\\alpha,\\beta}(z)` for
    real *z*.

    :raises ConvergenceError: if the series does not converge within
        ``config.term_cap`` terms and no reflection form applies.
    """
    return mittag_leffler_result(MLQuery(alpha, beta, z, tol), config).value


def euler_limit_gamma(x: float, n: int) -> float:
    """Euler's product limit :math:`n! n^x / (x (x + 1) \\cdots (x + n))`,
    accumulated in log space. Only meant as an independent check of
    :func:`gamma`.
    """
    j = np.arange(1, n + 1, dtype=np.float64)
    log_value = (
        math.fsum(np.log(j)) + x * math.log(n) - math.fsum(np.log(x + j)) - math.log(x)
    )
    return math.exp(log_value)
