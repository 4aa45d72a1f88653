"""Uniformly sampled time series and their periodicity defect."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fmgl.errors import GridMisalignmentError

#: relative tolerance when checking that a period is a whole number of steps
ALIGN_TOL = 1.0e-9


@dataclass(frozen=True, eq=False)
class HistorySegment:
    """Solution values on ``[t0 - L, t0]`` needed to start the fixed-memory
    stepper; ``samples[-1]`` is the value at ``t0``.
    """

    t0: float
    L: float
    N: int
    samples: np.ndarray

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim == 1:
            samples = samples[:, None]
        if samples.ndim != 2 or samples.shape[0] != self.N + 1:
            raise ValueError(
                f"history needs N + 1 = {self.N + 1} samples, got shape {samples.shape}"
            )
        object.__setattr__(self, "samples", samples)

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(-self.N, 1) * self.h

    @classmethod
    def from_functions(cls, funcs, t0: float, L: float, N: int) -> HistorySegment:
        """Sample one scalar function per component on the history grid."""
        h = L / N
        times = t0 + np.arange(-N, 1) * h
        columns = [np.broadcast_to(np.asarray(f(times), dtype=np.float64), times.shape)
                   for f in funcs]
        return cls(t0, L, N, np.stack(columns, axis=1))

    @classmethod
    def constant(cls, value, t0: float, L: float, N: int) -> HistorySegment:
        value = np.atleast_1d(np.asarray(value, dtype=np.float64))
        return cls(t0, L, N, np.tile(value, (N + 1, 1)))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples ``states[i]`` at ``t0 + i h``.

    ``states`` is 1d for scalar series and ``(n, d)`` for vector solutions.
    """

    t0: float
    h: float
    states: np.ndarray
    history: HistorySegment | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", np.asarray(self.states, dtype=np.float64))

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) * self.h

    @property
    def dim(self) -> int:
        return 1 if self.states.ndim == 1 else self.states.shape[1]


def steps_per_period(T: float, h: float) -> int:
    """Number of grid steps in *T*.

    :raises GridMisalignmentError: if *T* is not an integer multiple of *h*.
    """
    ratio = T / h
    n = round(ratio)
    if n < 1 or abs(ratio - n) > ALIGN_TOL * max(1.0, abs(ratio)):
        raise GridMisalignmentError(
            f"period {T!r} is not an integer multiple of the step {h!r} "
            f"(ratio {ratio!r})"
        )
    return int(n)


def sequence_defect(values: np.ndarray, period_steps: int) -> float:
    """Largest ``|x[i + P] - x[i]|`` (infinity norm for vector samples)."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape[0] < 2 * period_steps:
        raise ValueError(
            f"need at least two periods ({2 * period_steps} samples), "
            f"got {values.shape[0]}"
        )
    diff = values[period_steps:] - values[:-period_steps]
    return float(np.max(np.abs(diff)))


def periodicity_defect(
    traj: Trajectory,
    T: float,
    window: tuple[float, float] | None = None,
) -> float:
    """Largest ``|x(t + T) - x(t)|`` over the samples of *traj*, optionally
    restricted to pairs with both times inside *window*.

    :raises GridMisalignmentError: if *T* is not a multiple of ``traj.h``.
    """
    period = steps_per_period(T, traj.h)
    states = traj.states
    if window is not None:
        lo, hi = window
        t = traj.times
        slack = ALIGN_TOL * traj.h
        mask = (t >= lo - slack) & (t <= hi + slack)
        states = states[mask]
    return sequence_defect(states, period)
