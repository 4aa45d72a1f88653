"""Fixed memory length Grünwald-Letnikov fractional derivatives."""

from fmgl.closed_forms import (
    SinCosCoeffs,
    classical_sin,
    closed_form,
    d_constant,
    d_cos,
    d_exp,
    d_power,
    d_sin,
    sincos_coeffs,
)
from fmgl.functions import FunctionSpec, derivative, parse_expr, resolve
from fmgl.grunwald import (
    FracOrder,
    GridSpec,
    WeightTable,
    classical_gl_derivative,
    estimate_convergence_order,
    fm_gl_derivative,
    fm_gl_derivative_series,
    grunwald_weights,
)
from fmgl.integral import fm_gl_integral_form
from fmgl.solver import RotationSystem, solve_linear, solve_nonlinear
from fmgl.special import gamma, mittag_leffler, recip_gamma
from fmgl.trajectory import HistorySegment, Trajectory, periodicity_defect

__all__ = [
    "FracOrder",
    "FunctionSpec",
    "GridSpec",
    "HistorySegment",
    "RotationSystem",
    "SinCosCoeffs",
    "Trajectory",
    "WeightTable",
    "classical_gl_derivative",
    "classical_sin",
    "closed_form",
    "d_constant",
    "d_cos",
    "d_exp",
    "d_power",
    "d_sin",
    "derivative",
    "estimate_convergence_order",
    "fm_gl_derivative",
    "fm_gl_derivative_series",
    "fm_gl_integral_form",
    "gamma",
    "grunwald_weights",
    "mittag_leffler",
    "parse_expr",
    "periodicity_defect",
    "recip_gamma",
    "resolve",
    "sincos_coeffs",
    "solve_linear",
    "solve_nonlinear",
]
