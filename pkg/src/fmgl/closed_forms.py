r"""Exact fixed memory length derivatives of elementary functions.

Every denominator :math:`\Gamma(k - \alpha + 1)` goes through
:func:`~fmgl.special.recip_gamma`, so integer orders need no special cases:
the poles simply remove the corresponding terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fmgl.functions import Exponential, FunctionSpec, Fourier, Polynomial, Sum
from fmgl.special import mittag_leffler, recip_gamma


def d_constant(C: float, alpha: float, L: float) -> float:
    """Derivative of the constant ``C``: :math:`C / (L^\\alpha \\Gamma(1 - \\alpha))`."""
    _check_memory(L)
    # same operation order as the k = 0 term of d_power
    return C * L ** (-alpha) * recip_gamma(1.0 - alpha)


def d_power(n: int, t: float, alpha: float, L: float) -> float:
    """Derivative of :math:`t^n`,

    .. math::

        \\sum_{k = 0}^{n} \\frac{n!}{(n - k)!}
            \\frac{L^{k - \\alpha} (t - L)^{n - k}}{\\Gamma(k - \\alpha + 1)}.
    """
    _check_memory(L)
    if n < 0:
        raise ValueError(f"n must be non-negative: {n}")

    s = t - L
    terms = [
        math.perm(n, k) * L ** (k - alpha) * s ** (n - k) * recip_gamma(k - alpha + 1.0)
        for k in range(n + 1)
    ]
    return math.fsum(terms)


def d_exp(t: float, alpha: float, L: float, rate: float = 1.0) -> float:
    """Derivative of :math:`e^{r t}`:
    :math:`e^{r (t - L)} L^{-\\alpha} E_{1, 1 - \\alpha}(r L)`, which for
    ``r = 1`` is :math:`e^t E_{1, 1 - \\alpha}(L) / (L^\\alpha e^L)`.
    """
    _check_memory(L)
    return math.exp(rate * (t - L)) * L ** (-alpha) * mittag_leffler(1.0, 1.0 - alpha, rate * L)


@dataclass(frozen=True)
class SinCosCoeffs:
    r"""Coefficients with
    :math:`D_L^\alpha \sin t = a \sin(t - L) + b \cos(t - L)` and
    :math:`D_L^\alpha \cos t = a \cos(t - L) - b \sin(t - L)`.
    """

    a: float
    b: float


def sincos_coeffs(alpha: float, L: float) -> SinCosCoeffs:
    _check_memory(L)
    z = -L * L
    a = L ** (-alpha) * mittag_leffler(2.0, 1.0 - alpha, z)
    b = L ** (1.0 - alpha) * mittag_leffler(2.0, 2.0 - alpha, z)
    return SinCosCoeffs(a, b)


def d_sin(t, alpha: float, L: float, coeffs: SinCosCoeffs | None = None):
    """Derivative of :math:`\\sin t`; *t* may be an array."""
    c = coeffs if coeffs is not None else sincos_coeffs(alpha, L)
    return c.a * np.sin(t - L) + c.b * np.cos(t - L)


def d_cos(t, alpha: float, L: float, coeffs: SinCosCoeffs | None = None):
    """Derivative of :math:`\\cos t`; *t* may be an array."""
    c = coeffs if coeffs is not None else sincos_coeffs(alpha, L)
    return c.a * np.cos(t - L) - c.b * np.sin(t - L)


def classical_sin(t: float, alpha: float) -> float:
    """Classical derivative of :math:`\\sin` with lower terminal 0,
    :math:`t^{1 - \\alpha} E_{2, 2 - \\alpha}(-t^2)`.
    """
    if not t > 0:
        raise ValueError(f"t must be positive: {t!r}")
    return t ** (1.0 - alpha) * mittag_leffler(2.0, 2.0 - alpha, -t * t)


def closed_form(f: FunctionSpec, t: float, alpha: float, L: float) -> float:
    """Exact derivative of a catalog function at *t*.

    Frequencies and rates are handled by rescaling time: if
    :math:`g(t) = f(j t)` then :math:`D_L^\\alpha g(t) = j^\\alpha (D_{jL}^\\alpha f)(j t)`.

    :raises TypeError: if *f* has no closed form (expressions, samples).
    """
    if isinstance(f, Polynomial):
        return math.fsum(c * d_power(n, t, alpha, L) for n, c in enumerate(f.coeffs) if c)

    if isinstance(f, Fourier):
        total = []
        for j, s, c in f.terms():
            coeffs = sincos_coeffs(alpha, j * L)
            scale = j**alpha
            if s:
                total.append(s * scale * float(d_sin(j * t, alpha, j * L, coeffs)))
            if c:
                total.append(c * scale * float(d_cos(j * t, alpha, j * L, coeffs)))
        return math.fsum(total)

    if isinstance(f, Exponential):
        return f.amplitude * d_exp(t, alpha, L, f.rate)

    if isinstance(f, Sum):
        return math.fsum(closed_form(term, t, alpha, L) for term in f.terms)

    raise TypeError(f"no closed form for {type(f).__name__}")


def _check_memory(L: float) -> None:
    if not L > 0:
        raise ValueError(f"memory length must be positive: {L!r}")
