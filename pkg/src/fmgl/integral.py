r"""Fixed memory length derivative through its integral representation

.. math::

    D_L^\alpha f(t) = \sum_{k = 0}^{m} \frac{f^{(k)}(t - L) L^{k - \alpha}}{\Gamma(k - \alpha + 1)}
        + \frac{1}{\Gamma(m - \alpha + 1)} \int_{t - L}^{t} (t - \tau)^{m - \alpha} f^{(m + 1)}(\tau) \,\mathrm{d}\tau,

valid for :math:`m - 1 < \alpha < m`. This path shares no code with the
discrete sum and is used to cross-check it.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from fmgl.config import QUADRATURE_CONFIG, QuadratureConfig
from fmgl.functions import FunctionSpec, checked_call, derivative
from fmgl.grunwald import FracOrder, as_order
from fmgl.special import recip_gamma


@lru_cache(maxsize=16)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def graded_breakpoints(L: float, panels: int, config: QuadratureConfig = QUADRATURE_CONFIG) -> np.ndarray:
    """Panel breakpoints on ``[0, L]`` in the lag variable ``s = t - tau``.

    The interval is split uniformly, and the first uniform panel, where the
    kernel :math:`s^{m - \\alpha}` has its corner, is refined geometrically
    towards ``s = 0`` with ratio ``config.grading``.
    """
    if panels < 2:
        raise ValueError(f"need at least 2 panels: {panels}")
    n_graded = min(config.max_graded, max(1, panels // 4))
    n_uniform = panels - n_graded

    uniform = np.linspace(0.0, L, n_uniform + 1)
    width = uniform[1]
    graded = width * config.grading ** np.arange(n_graded, 0, -1)
    return np.concatenate([[0.0], graded, uniform[1:]])


def kernel_integral(
    g: FunctionSpec,
    t: float,
    L: float,
    exponent: float,
    panels: int,
    config: QuadratureConfig = QUADRATURE_CONFIG,
) -> float:
    """Composite Gauss-Legendre approximation of
    :math:`\\int_0^L s^{\\gamma} g(t - s) \\,\\mathrm{d}s`.
    """
    x, w = _gauss_legendre(config.order)
    edges = graded_breakpoints(L, panels, config)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    s = lo + half * (x + 1.0)

    values = np.asarray(checked_call(g, t - s), dtype=np.float64)
    per_panel = (half[:, 0]) * ((s**exponent * values) @ w)
    # fixed panel order keeps the result deterministic
    return math.fsum(per_panel)


def fm_gl_integral_form(
    f: FunctionSpec,
    t: float,
    order: FracOrder | float,
    L: float,
    panels: int = 1024,
    config: QuadratureConfig = QUADRATURE_CONFIG,
) -> float:
    """Evaluate the fixed memory length derivative by boundary terms plus a
    graded quadrature of the remainder integral.

    Catalog functions supply exact derivatives; expressions fall back to
    finite differences, which emit a
    :class:`~fmgl.errors.PrecisionWarning` when their error estimate exceeds
    ``1e-6``.
    """
    order = as_order(order)
    if order.is_integer:
        raise ValueError(f"integral form needs a non-integer order: {order.alpha}")
    if not L > 0:
        raise ValueError(f"memory length must be positive: {L!r}")

    alpha, m = order.alpha, order.m
    lower = t - L
    boundary = [
        float(checked_call(derivative(f, k), lower)) * L ** (k - alpha) * recip_gamma(k - alpha + 1.0)
        for k in range(m + 1)
    ]

    remainder = 0.0
    g = derivative(f, m + 1)
    if not _is_zero(g):
        remainder = recip_gamma(m - alpha + 1.0) * kernel_integral(
            g, t, L, m - alpha, panels, config
        )
    return math.fsum(boundary) + remainder


def _is_zero(f: FunctionSpec) -> bool:
    from fmgl.functions import Polynomial

    return isinstance(f, Polynomial) and not f.coeffs
