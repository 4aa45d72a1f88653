r"""Time stepping for fixed memory length fractional systems
:math:`D_L^\alpha x = F(x)`.

The discrete operator at :math:`t_n` reads the window :math:`[t_n - L, t_n]`,
so the solver starts from a :class:`~fmgl.trajectory.HistorySegment` instead
of a point value. Each step solves the discrete equation at the new point,

.. math::

    x_n + \sum_{k = 1}^{N} w_k x_{n - k} = h^\alpha F(x_n),

implicitly: by a single linear solve for linear systems and by fixed-point
iteration otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from fmgl.errors import SingularMatrixError, SolverConvergenceError
from fmgl.grunwald import grunwald_weights
from fmgl.trajectory import HistorySegment, Trajectory

#: condition number above which the step matrix counts as singular
COND_LIMIT = 1.0e14


@dataclass(frozen=True)
class RotationSystem:
    """Planar linear system with matrix ``[[a, -b], [b, a]]``."""

    a: float
    b: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, -self.b], [self.b, self.a]])

    @classmethod
    def periodic(cls, alpha: float, L: float) -> RotationSystem:
        """The system for which ``c (cos t, sin t)`` is an exact solution."""
        from fmgl.closed_forms import sincos_coeffs

        coeffs = sincos_coeffs(alpha, L)
        return cls(coeffs.a, coeffs.b)


def _num_steps(t0: float, h: float, T_end: float) -> int:
    if not T_end > t0:
        raise ValueError(f"expected T_end > t0: got {T_end} <= {t0}")
    # round up to the next grid node, ignoring rounding noise
    return math.ceil((T_end - t0) / h - 1.0e-9)


def _memory_sum(w_rev: np.ndarray, X: np.ndarray, j: int, N: int) -> np.ndarray:
    # sum_{k=1}^{N} w_k x_{j-k}; w_rev holds w_N, ..., w_1
    return w_rev @ X[j - N : j]


def solve_linear(
    A,
    hist: HistorySegment,
    alpha: float,
    T_end: float,
) -> Trajectory:
    """Solve :math:`D_L^\\alpha x = A x` from *hist* up to *T_end*.

    :raises SingularMatrixError: if :math:`I - h^\\alpha A` is numerically
        singular.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    d = hist.dim
    if A.shape != (d, d):
        raise ValueError(f"matrix shape {A.shape} does not match history dimension {d}")

    N, h = hist.N, hist.h
    M = _num_steps(hist.t0, h, T_end)
    step_matrix = np.eye(d) - h**alpha * A
    if np.linalg.cond(step_matrix) > COND_LIMIT:
        raise SingularMatrixError("I - h^alpha A is singular to working precision")
    lu = scipy.linalg.lu_factor(step_matrix)

    w_rev = np.ascontiguousarray(grunwald_weights(alpha, N).w[1:][::-1])
    X = np.empty((N + 1 + M, d))
    X[: N + 1] = hist.samples
    for j in range(N + 1, N + 1 + M):
        X[j] = scipy.linalg.lu_solve(lu, -_memory_sum(w_rev, X, j, N), check_finite=False)

    return Trajectory(hist.t0, h, X[N:].copy(), hist)


def solve_nonlinear(
    F: Callable[[np.ndarray], np.ndarray],
    hist: HistorySegment,
    alpha: float,
    T_end: float,
    fp_tol: float = 1.0e-12,
    fp_max: int = 100,
) -> Trajectory:
    """Solve :math:`D_L^\\alpha x = F(x)` with a fixed-point iteration per
    step, seeded with the previous state.

    :raises SolverConvergenceError: if a step needs more than *fp_max*
        iterations to bring the update below *fp_tol*.
    """
    N, h, d = hist.N, hist.h, hist.dim
    M = _num_steps(hist.t0, h, T_end)
    ha = h**alpha

    w_rev = np.ascontiguousarray(grunwald_weights(alpha, N).w[1:][::-1])
    X = np.empty((N + 1 + M, d))
    X[: N + 1] = hist.samples
    for j in range(N + 1, N + 1 + M):
        memory = _memory_sum(w_rev, X, j, N)
        x = X[j - 1]
        for _ in range(fp_max):
            x_new = ha * np.asarray(F(x), dtype=np.float64).reshape(d) - memory
            update = float(np.max(np.abs(x_new - x)))
            x = x_new
            if update <= fp_tol:
                break
        else:
            raise SolverConvergenceError(j - N, update, fp_max)
        X[j] = x

    return Trajectory(hist.t0, h, X[N:].copy(), hist)


def full_samples(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Times and states of *traj* with its history prepended (the value at
    ``t0`` appears once).
    """
    if traj.history is None:
        return traj.times, traj.states
    hist = traj.history
    times = traj.t0 + np.arange(-hist.N, len(traj)) * traj.h
    states = np.concatenate([hist.samples[:-1], traj.states.reshape(len(traj), -1)])
    return times, states


def max_deviation(traj: Trajectory, exact: Callable[[np.ndarray], np.ndarray]) -> float:
    """Largest componentwise ``|x(t) - exact(t)|`` over the solved samples."""
    ref = np.asarray(exact(traj.times), dtype=np.float64).reshape(traj.states.shape)
    return float(np.max(np.abs(traj.states - ref)))
