"""Tunable numerical settings, grouped by the routine that consumes them."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class MittagLefflerConfig:
    #: maximum number of series terms before giving up
    term_cap: int = 10000
    #: for alpha == 2, arguments at or below this value also try the
    #: reflection (asymptotic) form and keep whichever path has the smaller
    #: estimated error
    reflection_threshold: float = -25.0
    #: absolute truncation target used when the caller does not pass one
    default_tol: float = 1.0e-16


@dataclass(frozen=True)
class QuadratureConfig:
    #: Gauss-Legendre nodes per panel
    order: int = 10
    #: ratio between consecutive graded panels approaching the kernel corner
    grading: float = 0.7
    #: upper bound on the number of graded panels
    max_graded: int = 100


@dataclass(frozen=True)
class FiniteDifferenceConfig:
    #: estimated error above which a PrecisionWarning is emitted
    warn_above: float = 1.0e-6


ML_CONFIG = MittagLefflerConfig()
QUADRATURE_CONFIG = QuadratureConfig()
FD_CONFIG = FiniteDifferenceConfig()
