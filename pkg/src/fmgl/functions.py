"""Scalar functions of time that the derivative operators act on.

There are three kinds of :class:`FunctionSpec`:

* catalog functions (:class:`Polynomial`, :class:`Fourier`,
  :class:`Exponential` and their :class:`Sum`), which know their derivatives
  of any order exactly;
* :class:`Expression`, a parsed user expression, which only supports
  finite-difference derivatives;
* :class:`Samples`, a linearly interpolated table of values.

All of them are immutable and callable on floats or numpy arrays.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from fmgl import expr as _expr
from fmgl.config import FD_CONFIG
from fmgl.errors import DomainError, PrecisionWarning

_EPS = float(np.finfo(np.float64).eps)


class FunctionSpec:
    """Base class for evaluable scalar functions of ``t``."""

    #: highest derivative order available in closed form
    analytic_order: float = 0

    def __call__(self, t):
        raise NotImplementedError

    def derivative(self, order: int = 1) -> FunctionSpec:
        raise NotImplementedError

    @property
    def is_analytic(self) -> bool:
        return math.isinf(self.analytic_order)


def _trim(coeffs) -> tuple[float, ...]:
    c = [float(x) for x in coeffs]
    while c and c[-1] == 0.0:
        c.pop()
    return tuple(c)


# {{{ catalog


class Catalog(FunctionSpec):
    analytic_order = math.inf


@dataclass(frozen=True)
class Polynomial(Catalog):
    """:math:`\\sum_k c_k t^k` with coefficients in ascending order."""

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        if not self.coeffs:
            return 0.0 * t
        return np.polynomial.polynomial.polyval(t, self.coeffs)

    def derivative(self, order: int = 1) -> Polynomial:
        c = list(self.coeffs)
        for _ in range(order):
            c = [k * c[k] for k in range(1, len(c))]
        return Polynomial(tuple(c))


@dataclass(frozen=True)
class Fourier(Catalog):
    r""":math:`\sum_{j \ge 1} s_j \sin(j t) + c_j \cos(j t)`.

    ``sin[j - 1]`` and ``cos[j - 1]`` hold the coefficients of frequency ``j``.
    """

    sin: tuple[float, ...] = ()
    cos: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "sin", _trim(self.sin))
        object.__setattr__(self, "cos", _trim(self.cos))

    def terms(self):
        """Yield ``(j, sin_coeff, cos_coeff)`` for every frequency present."""
        for j in range(1, max(len(self.sin), len(self.cos)) + 1):
            s = self.sin[j - 1] if j <= len(self.sin) else 0.0
            c = self.cos[j - 1] if j <= len(self.cos) else 0.0
            if s or c:
                yield j, s, c

    def __call__(self, t):
        result = 0.0 * np.asarray(t, dtype=np.float64)
        for j, s, c in self.terms():
            result = result + s * np.sin(j * t) + c * np.cos(j * t)
        return result if np.ndim(result) else float(result)

    def derivative(self, order: int = 1) -> Fourier:
        n = max(len(self.sin), len(self.cos))
        s = list(self.sin) + [0.0] * (n - len(self.sin))
        c = list(self.cos) + [0.0] * (n - len(self.cos))
        for _ in range(order):
            # d/dt (s sin jt + c cos jt) = -j c sin jt + j s cos jt
            s, c = [-(j + 1) * c[j] for j in range(n)], [(j + 1) * s[j] for j in range(n)]
        return Fourier(tuple(s), tuple(c))


@dataclass(frozen=True)
class Exponential(Catalog):
    """:math:`A e^{r t}`."""

    amplitude: float = 1.0
    rate: float = 1.0

    def __call__(self, t):
        return self.amplitude * np.exp(self.rate * t)

    def derivative(self, order: int = 1) -> FunctionSpec:
        amplitude = self.amplitude * self.rate**order
        if amplitude == 0.0:
            return Polynomial(())
        return Exponential(amplitude, self.rate)


@dataclass(frozen=True)
class Sum(Catalog):
    """Sum of catalog functions."""

    terms: tuple[Catalog, ...]

    def __call__(self, t):
        result = 0.0 * np.asarray(t, dtype=np.float64)
        for term in self.terms:
            result = result + term(t)
        return result if np.ndim(result) else float(result)

    def derivative(self, order: int = 1) -> Catalog:
        return combine(*(term.derivative(order) for term in self.terms))


def _flatten(terms):
    for term in terms:
        if isinstance(term, Sum):
            yield from _flatten(term.terms)
        else:
            yield term


def _add_padded(a, b):
    n = max(len(a), len(b))
    a = tuple(a) + (0.0,) * (n - len(a))
    b = tuple(b) + (0.0,) * (n - len(b))
    return tuple(x + y for x, y in zip(a, b))


def combine(*terms: Catalog) -> Catalog:
    """Add catalog functions, merging like terms into a normal form.

    The result is a single catalog function when possible, and otherwise a
    :class:`Sum` of (polynomial, Fourier, exponentials by rate) in that order.
    """
    poly: tuple[float, ...] = ()
    fsin: tuple[float, ...] = ()
    fcos: tuple[float, ...] = ()
    exps: dict[float, float] = {}

    for term in _flatten(terms):
        if isinstance(term, Polynomial):
            poly = _add_padded(poly, term.coeffs)
        elif isinstance(term, Fourier):
            fsin = _add_padded(fsin, term.sin)
            fcos = _add_padded(fcos, term.cos)
        elif isinstance(term, Exponential):
            exps[term.rate] = exps.get(term.rate, 0.0) + term.amplitude
        else:
            raise TypeError(f"not a catalog function: {type(term).__name__}")

    parts: list[Catalog] = []
    if _trim(poly):
        parts.append(Polynomial(poly))
    if _trim(fsin) or _trim(fcos):
        parts.append(Fourier(fsin, fcos))
    for rate in sorted(exps):
        if exps[rate] != 0.0:
            parts.append(Exponential(exps[rate], rate))

    if not parts:
        return Polynomial(())
    if len(parts) == 1:
        return parts[0]
    return Sum(tuple(parts))


def scale(f: Catalog, c: float) -> Catalog:
    """Multiply a catalog function by a constant."""
    if isinstance(f, Polynomial):
        return Polynomial(tuple(c * x for x in f.coeffs))
    if isinstance(f, Fourier):
        return Fourier(tuple(c * x for x in f.sin), tuple(c * x for x in f.cos))
    if isinstance(f, Exponential):
        return combine(Exponential(c * f.amplitude, f.rate))
    if isinstance(f, Sum):
        return combine(*(scale(term, c) for term in f.terms))
    raise TypeError(f"not a catalog function: {type(f).__name__}")


def constant(c: float) -> Polynomial:
    return Polynomial((c,))


def power(n: int) -> Polynomial:
    if n < 0:
        raise ValueError(f"power must be non-negative: {n}")
    return Polynomial((0.0,) * n + (1.0,))


def polynomial(*coeffs: float) -> Polynomial:
    return Polynomial(tuple(coeffs))


def sine() -> Fourier:
    return Fourier(sin=(1.0,))


def cosine() -> Fourier:
    return Fourier(cos=(1.0,))


def exponential(amplitude: float = 1.0, rate: float = 1.0) -> Exponential:
    return Exponential(amplitude, rate)


def fourier(sin=(), cos=()) -> Fourier:
    return Fourier(tuple(sin), tuple(cos))


CATALOG = {
    "sin": sine,
    "cos": cosine,
    "exp": exponential,
    "const": constant,
    "constant": constant,
    "power": power,
    "poly": polynomial,
    "polynomial": polynomial,
    "fourier": fourier,
}

# }}}


# {{{ finite differences


#: order of accuracy of the central difference stencils
FD_ACCURACY = 4


def _central_weights(order: int, accuracy: int = FD_ACCURACY) -> np.ndarray:
    """Weights of the central difference for ``order``-th derivatives with
    error :math:`O(h^{accuracy})` on the stencil ``-p..p``.
    """
    p = (order + 1) // 2 + accuracy // 2 - 1
    offsets = np.arange(-p, p + 1, dtype=np.float64)
    vander = np.vander(offsets, increasing=True).T
    rhs = np.zeros(len(offsets))
    rhs[order] = math.factorial(order)
    return np.linalg.solve(vander, rhs)


@dataclass(frozen=True)
class FiniteDifference(FunctionSpec):
    """Numerical ``order``-th derivative of *base* by central differences.

    The step :math:`\\epsilon^{1 / (order + 4)}` balances the fourth-order
    truncation error against rounding; the difference between steps ``h``
    and ``2 h`` serves as an error estimate.
    """

    base: FunctionSpec
    order: int

    analytic_order = 0

    def step(self, t) -> Any:
        scale = np.maximum(1.0, np.abs(t))
        return _EPS ** (1.0 / (self.order + FD_ACCURACY)) * scale

    def _apply(self, t, h):
        w = _central_weights(self.order)
        p = (len(w) - 1) // 2
        acc = 0.0
        for i, wi in enumerate(w):
            if wi != 0.0:
                acc = acc + wi * self.base(t + (i - p) * h)
        return acc / h**self.order

    def evaluate_with_error(self, t):
        h = self.step(t)
        value = self._apply(t, h)
        error = np.abs(value - self._apply(t, 2.0 * h))
        return value, error

    def __call__(self, t):
        if self.order == 0:
            return self.base(t)
        return self._apply(t, self.step(t))

    def derivative(self, order: int = 1) -> FiniteDifference:
        return FiniteDifference(self.base, self.order + order)


def checked_call(f: FunctionSpec, t, warn_above: float = FD_CONFIG.warn_above):
    """Evaluate *f*, emitting a :class:`PrecisionWarning` if it is a
    finite-difference derivative whose error estimate exceeds *warn_above*.
    """
    if isinstance(f, FiniteDifference) and f.order > 0:
        value, error = f.evaluate_with_error(t)
        worst = float(np.max(error))
        if worst > warn_above:
            warnings.warn(
                f"finite-difference derivative of order {f.order} has estimated "
                f"error {worst:.2e}",
                PrecisionWarning,
                stacklevel=2,
            )
        return value
    return f(t)


# }}}


# {{{ expressions


@dataclass(frozen=True)
class Expression(FunctionSpec):
    """A parsed user expression in ``t``."""

    tree: _expr.Node
    source: str = field(default="", compare=False)

    def __call__(self, t):
        return _expr.evaluate(self.tree, t)

    def derivative(self, order: int = 1) -> FunctionSpec:
        if order == 0:
            return self
        return FiniteDifference(self, order)


def parse_expr(src: str) -> FunctionSpec:
    """Parse an expression in ``t`` into an :class:`Expression`."""
    return Expression(_expr.parse(src), src)


def _lower(node: _expr.Node) -> Catalog | None:
    """Recognize sums and constant multiples of polynomials, ``sin(j t)``,
    ``cos(j t)`` and ``exp(r t)``; return None for anything else.
    """
    E = _expr
    if isinstance(node, E.Num):
        return constant(node.value)
    if isinstance(node, E.Pi):
        return constant(math.pi)
    if isinstance(node, E.Var):
        return power(1)
    if isinstance(node, E.Neg):
        inner = _lower(node.operand)
        return None if inner is None else scale(inner, -1.0)

    if isinstance(node, E.BinOp):
        left = _lower(node.left)
        right = _lower(node.right)
        if left is None or right is None:
            return None
        if node.op == "+":
            return combine(left, right)
        if node.op == "-":
            return combine(left, scale(right, -1.0))

        lc = _as_constant(left)
        rc = _as_constant(right)
        if node.op == "*":
            if lc is not None:
                return scale(right, lc)
            if rc is not None:
                return scale(left, rc)
            if isinstance(left, Polynomial) and isinstance(right, Polynomial):
                return Polynomial(
                    tuple(np.polynomial.polynomial.polymul(left.coeffs, right.coeffs))
                )
            return None
        if node.op == "/":
            if rc is not None and rc != 0.0:
                return scale(left, 1.0 / rc)
            return None
        if node.op == "^":
            if (
                isinstance(left, Polynomial)
                and rc is not None
                and rc >= 0
                and rc == int(rc)
                and rc <= 64
            ):
                return Polynomial(
                    tuple(np.polynomial.polynomial.polypow(left.coeffs or (0.0,), int(rc)))
                )
            return None
        return None

    if isinstance(node, E.Call):
        arg = _lower(node.arg)
        if arg is None:
            return None
        c = _as_constant(arg)
        if c is not None:
            try:
                return constant(float(_expr.evaluate(E.Call(node.name, E.Num(c)), 0.0)))
            except DomainError:
                return None
        if not isinstance(arg, Polynomial) or arg.degree != 1:
            return None

        shift, rate = arg.coeffs
        if node.name == "exp":
            return Exponential(math.exp(shift), rate)
        if node.name in ("sin", "cos") and shift == 0.0 and rate != 0.0:
            j = abs(rate)
            if j != int(j):
                return None
            j = int(j)
            sign = math.copysign(1.0, rate)
            coeffs = (0.0,) * (j - 1) + (1.0,)
            if node.name == "sin":
                return Fourier(sin=tuple(sign * c for c in coeffs))
            return Fourier(cos=coeffs)
        return None

    return None


def _as_constant(f: Catalog) -> float | None:
    if isinstance(f, Polynomial) and f.degree <= 0:
        return f.coeffs[0] if f.coeffs else 0.0
    return None


def to_catalog(f: FunctionSpec) -> FunctionSpec:
    """Replace an :class:`Expression` by an equivalent catalog function when
    its form is recognized, so that it gains exact derivatives.
    """
    if isinstance(f, Expression):
        lowered = _lower(f.tree)
        if lowered is not None:
            return lowered
    return f


def resolve(text: str) -> FunctionSpec:
    """Turn a command-line function argument into a :class:`FunctionSpec`.

    Accepts catalog names (``sin``, ``cos``, ``exp``), ``name:args`` forms
    (``const:7``, ``power:3``, ``poly:1,0,2``, ``fourier:1,0.5;0,0.2``) and
    otherwise any expression in ``t``, which is mapped onto the catalog when
    recognized.
    """
    text = text.strip()
    name, sep, args = text.partition(":")
    if sep and name in CATALOG:
        if name == "fourier":
            s, _, c = args.partition(";")
            return fourier(_floats(s), _floats(c))
        values = _floats(args)
        if name in ("power",):
            return power(int(values[0]))
        return CATALOG[name](*values)
    if text in ("sin", "cos", "exp"):
        return CATALOG[text]()
    return to_catalog(parse_expr(text))


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


# }}}


# {{{ samples


@dataclass(frozen=True, eq=False)
class Samples(FunctionSpec):
    """Piecewise linear interpolant of ``values`` at increasing ``times``."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if times.ndim != 1 or times.shape != values.shape or times.size < 2:
            raise ValueError("times and values must be 1d arrays of equal length >= 2")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        lo, hi = self.times[0], self.times[-1]
        # tolerate rounding in grid arithmetic
        slack = 1.0e-9 * (hi - lo) / (self.times.size - 1)
        if np.any(t < lo - slack) or np.any(t > hi + slack):
            raise DomainError(f"sample query outside [{lo}, {hi}]")
        result = np.interp(np.clip(t, lo, hi), self.times, self.values)
        return result if np.ndim(result) else float(result)

    def derivative(self, order: int = 1) -> FunctionSpec:
        if order == 0:
            return self
        return FiniteDifference(self, order)


# }}}


def eval(f: FunctionSpec, t):  # noqa: A001
    """Value of *f* at *t*."""
    return f(t)


def derivative(f: FunctionSpec, order: int) -> FunctionSpec:
    """The ``order``-th derivative of *f*: exact for catalog functions, a
    :class:`FiniteDifference` wrapper otherwise.
    """
    if order < 0:
        raise ValueError(f"order must be non-negative: {order}")
    if order == 0:
        return f
    return f.derivative(order)
