"""Experiments comparing the fixed memory length operator with the integer
order and classical operators: interpolation limits, the influence of the
memory length and the (non-)periodicity of derivatives of the sine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fmgl.closed_forms import classical_sin, closed_form, d_sin, sincos_coeffs
from fmgl.functions import Catalog, FunctionSpec, Fourier, derivative
from fmgl.grunwald import FracOrder, GridSpec, fm_gl_derivative, fm_gl_derivative_series
from fmgl.table import Table

TWO_PI = 2.0 * math.pi


def _fm_value(f: FunctionSpec, t: float, alpha: float, L: float, N: int) -> float:
    if isinstance(f, Catalog):
        return closed_form(f, t, alpha, L)
    return fm_gl_derivative(f, t, alpha, GridSpec(L, N))


def interpolation_curve(
    f: FunctionSpec,
    t: float,
    L: float,
    alphas: Sequence[float],
    N: int = 8192,
) -> Table:
    """Derivative of order ``alpha`` next to the integer-order derivative it
    should approach.

    Each ``alpha`` in ``(m - 1, m)`` is compared with :math:`f^{(m)}(t)` when
    it lies in the upper half of the interval and with :math:`f^{(m - 1)}(t)`
    otherwise. Catalog functions use the closed form, anything else the
    discrete operator with ``N`` steps.
    """
    table = Table(("alpha", "value", "reference", "abs_error"))
    for alpha in alphas:
        order = FracOrder(alpha)
        if order.is_integer:
            raise ValueError(f"orders must be non-integer: {alpha}")
        m = order.m
        target = m if alpha - (m - 1) >= 0.5 else m - 1
        reference = float(derivative(f, target)(t))
        value = _fm_value(f, t, alpha, L, N)
        table.append(alpha, value, reference, abs(value - reference))
    return table


@dataclass(frozen=True)
class MemorySweep:
    times: np.ndarray
    Ls: tuple[float, ...]
    #: one row of derivative values per memory length
    values: np.ndarray
    #: sup distance between the series of consecutive memory lengths
    distances: tuple[float, ...]

    def table(self) -> Table:
        table = Table(("t", *(f"L={L!r}" for L in self.Ls)))
        for i, t in enumerate(self.times):
            table.append(float(t), *(float(v) for v in self.values[:, i]))
        return table


def memory_sweep(
    f: FunctionSpec,
    alpha: float,
    t_range: tuple[float, float],
    Ls: Sequence[float],
    num: int = 401,
    N: int = 4096,
) -> MemorySweep:
    """Derivative series of *f* for several memory lengths.

    Catalog functions are evaluated in closed form on ``num`` equally spaced
    points; other functions use the discrete operator, whose grid follows the
    step ``L / N`` of each memory length.
    """
    Ls = tuple(float(L) for L in Ls)
    if any(L <= 0 for L in Ls) or any(b <= a for a, b in zip(Ls, Ls[1:])):
        raise ValueError(f"memory lengths must be positive and increasing: {Ls}")

    t0, t1 = t_range
    times = np.linspace(t0, t1, num)
    rows = []
    for L in Ls:
        if isinstance(f, Fourier) and f == Fourier(sin=(1.0,)):
            rows.append(d_sin(times, alpha, L, sincos_coeffs(alpha, L)))
        elif isinstance(f, Catalog):
            rows.append(np.array([closed_form(f, t, alpha, L) for t in times]))
        else:
            grid = GridSpec(L, N)
            # one extra step so the grid brackets t1 for the interpolation
            series = fm_gl_derivative_series(f, t0, t1 + grid.h, alpha, grid)
            rows.append(np.interp(times, series.times, series.states))

    values = np.vstack(rows)
    distances = tuple(
        float(np.max(np.abs(values[i + 1] - values[i]))) for i in range(len(Ls) - 1)
    )
    return MemorySweep(times, Ls, values, distances)


def classical_defect(alpha: float, start: float, end: float, num: int = 2001) -> float:
    """Largest :math:`|g(t + 2\\pi) - g(t)|` for :math:`t \\in [start, end - 2\\pi]`,
    where ``g`` is the classical derivative of the sine.
    """
    if not end - start > TWO_PI:
        raise ValueError("window must be longer than one period")
    ts = np.linspace(start, end - TWO_PI, num)
    return max(abs(classical_sin(t + TWO_PI, alpha) - classical_sin(t, alpha)) for t in ts)


def fm_sin_defect(alpha: float, L: float, start: float, end: float, num: int = 2001) -> float:
    """The same defect for the fixed memory length derivative of the sine."""
    ts = np.linspace(start, end - TWO_PI, num)
    c = sincos_coeffs(alpha, L)
    return float(np.max(np.abs(d_sin(ts + TWO_PI, alpha, L, c) - d_sin(ts, alpha, L, c))))


@dataclass(frozen=True)
class NonPeriodicityDemo:
    table: Table
    #: defect of the classical derivative over the last two periods
    classical_defect: float
    #: defect of the fixed memory length derivative over the same window
    fm_defect: float
    #: memory length used for ``fm_defect``
    L: float


def nonperiodicity_demo(
    alpha: float,
    t_max: float,
    steps: int,
    L: float = 30.0,
) -> NonPeriodicityDemo:
    """Classical derivative of the sine against its asymptote
    :math:`\\sin(t + \\alpha \\pi / 2)` on ``steps`` points of ``(0, t_max]``.
    """
    if not t_max > TWO_PI:
        raise ValueError(f"t_max must exceed 2 pi: {t_max!r}")
    if steps < 1:
        raise ValueError(f"steps must be positive: {steps}")

    table = Table(("t", "classical_value", "envelope", "difference"))
    for i in range(1, steps + 1):
        t = t_max * i / steps
        value = classical_sin(t, alpha)
        envelope = math.sin(t + alpha * math.pi / 2.0)
        table.append(t, value, envelope, abs(value - envelope))

    start = max(t_max - 2.0 * TWO_PI, 1.0e-3)
    return NonPeriodicityDemo(
        table,
        classical_defect(alpha, start, t_max),
        fm_sin_defect(alpha, L, start, t_max),
        L,
    )
