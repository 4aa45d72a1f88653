"""Exception and warning types raised by :mod:`fmgl`."""

from __future__ import annotations


class FmglError(Exception):
    """Base class for all library errors."""


class PoleError(FmglError, ValueError):
    """Gamma evaluated at (or within rounding of) a non-positive integer."""


class DomainError(FmglError, ValueError):
    """A function was evaluated outside its domain."""


class ConvergenceError(FmglError, ArithmeticError):
    """A series or iteration failed to reach its tolerance."""


class DegenerateError(FmglError, ArithmeticError):
    """Differences too small to estimate a convergence rate."""


class GridMisalignmentError(FmglError, ValueError):
    """A period or time span is not an integer multiple of the grid step."""


class SingularMatrixError(FmglError, ArithmeticError):
    """The implicit step matrix is numerically singular."""


class SolverConvergenceError(ConvergenceError):
    """Fixed-point iteration of the nonlinear stepper did not converge."""

    def __init__(self, step: int, residual: float, iterations: int) -> None:
        super().__init__(
            f"fixed-point iteration did not converge at step {step} after "
            f"{iterations} iterations (last update norm {residual:.3e}); "
            "try a smaller step (larger N)"
        )
        self.step = step
        self.residual = residual
        self.iterations = iterations


class PrecisionWarning(UserWarning):
    """Finite-difference derivatives carry an estimated error above target."""
