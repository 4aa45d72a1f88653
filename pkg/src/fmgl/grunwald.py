r"""Grünwald weights and the discrete Grünwald-Letnikov operators.

The fixed memory length operator at finite step :math:`h = L / N` is

.. math::

    D_L^\alpha f(t) \approx h^{-\alpha} \sum_{k = 0}^{N} w_k f(t - k h),
    \qquad w_k = (-1)^k \binom{\alpha}{k},

i.e. the window always spans :math:`[t - L, t]`. The classical operator uses
the same sum, but with a fixed lower terminal :math:`a`, so that
:math:`N h = t - a` grows with :math:`t`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fmgl.errors import DegenerateError
from fmgl.functions import FunctionSpec
from fmgl.trajectory import Trajectory


@dataclass(frozen=True)
class FracOrder:
    """Order :math:`\\alpha \\ge 0` together with the integer ``m`` such
    that :math:`m - 1 \\le \\alpha < m`.
    """

    alpha: float

    def __post_init__(self) -> None:
        if not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise ValueError(f"order must be finite and non-negative: {self.alpha!r}")

    @property
    def m(self) -> int:
        return math.floor(self.alpha) + 1

    @property
    def is_integer(self) -> bool:
        return self.alpha == math.floor(self.alpha)


def as_order(order: FracOrder | float) -> FracOrder:
    return order if isinstance(order, FracOrder) else FracOrder(float(order))


@dataclass(frozen=True)
class GridSpec:
    """Memory length ``L`` split into ``N`` steps; the step is always derived
    as ``h = L / N``.
    """

    L: float
    N: int

    def __post_init__(self) -> None:
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ValueError(f"memory length must be positive: {self.L!r}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer: {self.N!r}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def h(self) -> float:
        return self.L / self.N

    def check_order(self, order: FracOrder) -> None:
        needed = math.ceil(order.alpha) + 2
        if self.N < needed:
            raise ValueError(f"N = {self.N} is too small for order {order.alpha}; need N >= {needed}")


@dataclass(frozen=True, eq=False)
class WeightTable:
    alpha: float
    w: np.ndarray

    @property
    def N(self) -> int:
        return self.w.size - 1


def grunwald_weights(alpha: float, N: int) -> WeightTable:
    """Weights :math:`w_0, \\dots, w_N` of order *alpha*.

    Built from the recurrence :math:`w_k = w_{k - 1} (k - 1 - \\alpha) / k`,
    which avoids the overflowing Gamma quotients and makes the weights vanish
    exactly beyond ``k = alpha`` for integer orders.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative: {alpha!r}")
    if N < 1:
        raise ValueError(f"N must be positive: {N!r}")

    k = np.arange(1, N + 1, dtype=np.float64)
    factors = np.empty(N + 1)
    factors[0] = 1.0
    factors[1:] = (k - 1.0 - alpha) / k
    w = np.cumprod(factors)
    w.flags.writeable = False
    return WeightTable(float(alpha), w)


def fm_gl_derivative(
    f: FunctionSpec,
    t: float,
    order: FracOrder | float,
    grid: GridSpec,
    weights: WeightTable | None = None,
) -> float:
    """Fixed memory length Grünwald-Letnikov derivative of *f* at *t* on *grid*."""
    order = as_order(order)
    grid.check_order(order)
    if weights is None:
        weights = grunwald_weights(order.alpha, grid.N)

    h = grid.h
    samples = np.asarray(f(t - np.arange(grid.N + 1) * h), dtype=np.float64)
    return float(np.dot(weights.w, samples) / h**order.alpha)


def fm_gl_derivative_series(
    f: FunctionSpec,
    t0: float,
    t1: float,
    order: FracOrder | float,
    grid: GridSpec,
) -> Trajectory:
    """Evaluate :func:`fm_gl_derivative` at ``t0, t0 + h, ...`` up to *t1*.

    *f* is sampled once on ``[t0 - L, t1]`` and each output is the dot product
    of the weights with a sliding window of those samples.

    .. note::

        This is a direct convolution costing ``O(n N)``; an FFT convolution
        would be faster for long series but breaks the bit-for-bit equality
        of windows that see identical samples.
    """
    if not t1 > t0:
        raise ValueError(f"expected t1 > t0: got [{t0}, {t1}]")
    order = as_order(order)
    grid.check_order(order)
    weights = grunwald_weights(order.alpha, grid.N)

    h = grid.h
    n = math.floor((t1 - t0) / h + 1.0e-9) + 1
    times = t0 + np.arange(-grid.N, n) * h
    samples = np.asarray(f(times), dtype=np.float64)
    values = np.convolve(samples, weights.w, mode="valid") / h**order.alpha

    return Trajectory(t0, h, values)


def classical_gl_derivative(
    f: FunctionSpec,
    t: float,
    alpha: float,
    a: float,
    steps: int,
) -> float:
    """Classical Grünwald-Letnikov derivative with lower terminal *a*,
    discretized with ``steps`` intervals of size ``(t - a) / steps``.
    """
    if not t > a:
        raise ValueError(f"expected t > a: got t = {t}, a = {a}")
    weights = grunwald_weights(alpha, steps)
    h = (t - a) / steps
    samples = np.asarray(f(t - np.arange(steps + 1) * h), dtype=np.float64)
    return float(np.dot(weights.w, samples) / h**alpha)


def estimate_convergence_order(values_at: Sequence[tuple[float, float]]) -> float:
    """Observed order from the three finest ``(h, value)`` pairs, with ``h``
    halving between them: :math:`\\log_2 |v_h - v_{h/2}| / |v_{h/2} - v_{h/4}|`.

    :raises DegenerateError: if the differences are below ``1e-14``.
    """
    if len(values_at) < 3:
        raise ValueError("need at least three (h, value) pairs")

    pairs = sorted(values_at, key=lambda p: -p[0])[-3:]
    (h0, v0), (h1, v1), (h2, v2) = pairs
    for coarse, fine in ((h0, h1), (h1, h2)):
        if not math.isclose(coarse, 2.0 * fine, rel_tol=1.0e-9):
            raise ValueError(f"step sizes must halve: {coarse!r} -> {fine!r}")

    d0 = abs(v0 - v1)
    d1 = abs(v1 - v2)
    if d0 < 1.0e-14 or d1 < 1.0e-14:
        raise DegenerateError(
            f"differences {d0:.3e}, {d1:.3e} too small to estimate an order"
        )
    return math.log2(d0 / d1)
