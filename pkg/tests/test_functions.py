import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmgl import expr
from fmgl.errors import DomainError
from fmgl.expr import ParseError, UnknownIdentifierError, parse, random_expression, to_source
from fmgl.functions import (
    Exponential,
    Expression,
    FiniteDifference,
    Fourier,
    Polynomial,
    Samples,
    Sum,
    combine,
    constant,
    cosine,
    derivative,
    eval as feval,
    exponential,
    fourier,
    parse_expr,
    polynomial,
    power,
    resolve,
    sine,
)

CATALOG_CASES = [
    sine(),
    cosine(),
    exponential(),
    exponential(0.5, -2.0),
    power(5),
    polynomial(1.0, -2.0, 0.0, 3.0),
    fourier(sin=(1.0, 0.0, -0.3), cos=(0.2, 0.5)),
    combine(sine(), power(2), exponential(2.0, 0.5)),
]


# {{{ parser


def test_parser_examples():
    f = parse_expr("sin(t) + 0.5*cos(2*t)")
    assert f(0.0) == 0.5
    assert resolve("sin(t) + 0.5*cos(2*t)") == Fourier(sin=(1.0,), cos=(0.0, 0.5))
    assert parse_expr("t^3 - 2*t")(2.0) == 4.0


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse_expr("sin(x)")
    assert info.value.offset == 4
    assert info.value.name == "x"


@pytest.mark.parametrize(
    ("src", "offset", "expected"),
    [
        ("1 +", 3, "number"),
        ("(t", 2, ")"),
        ("sin t", 4, "("),
        ("t t", 2, "end of input"),
        ("2 * * t", 4, "t"),
    ],
)
def test_syntax_errors_carry_offset_and_expected_tokens(src, offset, expected):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.offset == offset
    assert expected in info.value.expected


def test_bad_character_and_empty_input():
    with pytest.raises(ParseError) as info:
        parse("t $ 2")
    assert info.value.offset == 2
    with pytest.raises(ParseError):
        parse("   ")


def test_precedence_and_associativity():
    assert parse_expr("2^3^2")(0.0) == 2.0**9
    assert parse_expr("-t^2")(3.0) == 9.0
    assert parse_expr("-(t^2)")(3.0) == -9.0
    assert parse_expr("1 - 2 - 3")(0.0) == -4.0
    assert parse_expr("8 / 4 / 2")(0.0) == 1.0
    assert parse_expr("2 + 3 * t")(2.0) == 8.0
    assert parse_expr("pi")(0.0) == math.pi


def test_spans_point_into_source():
    src = "1 + sin(t)"
    tree = parse(src)
    call = tree.right
    assert src[call.span[0] : call.span[1]] == "sin(t)"


def test_round_trip_corpus():
    rng = random.Random(1234)
    for _ in range(100):
        tree = random_expression(rng, depth=5)
        assert parse(to_source(tree)) == tree


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_round_trip_property(seed, depth):
    tree = random_expression(random.Random(seed), depth)
    src = to_source(tree)
    assert parse(src) == tree
    assert to_source(parse(src)) == src


@given(st.integers(0, 2**32 - 1))
def test_evaluation_is_deterministic(seed):
    tree = random_expression(random.Random(seed), 4)
    t = np.linspace(0.1, 3.0, 7)
    try:
        a = expr.evaluate(tree, t)
    except DomainError:
        return
    b = expr.evaluate(parse(to_source(tree)), t)
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("src", ["ln(t)", "sqrt(t)", "1/t", "t^0.5"])
def test_domain_errors(src):
    with pytest.raises(DomainError):
        parse_expr(src)(np.array([1.0, -1.0, 0.0]) if src != "1/t" else 0.0)


# }}}


# {{{ catalog


def test_eval_examples():
    assert feval(power(3), 2.0) == 8.0
    assert feval(constant(7.0), -123.0) == 7.0
    assert feval(Samples([0.0, 1.0], [0.0, 2.0]), 0.5) == 1.0


def test_derivative_examples():
    assert derivative(sine(), 1) == cosine()
    assert derivative(power(3), 4) == constant(0.0)
    assert derivative(fourier(sin=(1.0,)), 2) == fourier(sin=(-1.0,))


@pytest.mark.parametrize("f", CATALOG_CASES)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_derivative_composition(f, n):
    assert derivative(derivative(f, n), 1) == derivative(f, n + 1)
    assert derivative(f, 0) == f


@pytest.mark.parametrize("f", CATALOG_CASES)
@pytest.mark.parametrize("order", [1, 2, 3])
def test_finite_differences_match_analytic(f, order):
    t = np.linspace(-2.0, 2.0, 9)
    fd = FiniteDifference(f, order)
    exact = derivative(f, order)(t)
    assert np.max(np.abs(fd(t) - exact)) <= 1e-6 * max(1.0, np.max(np.abs(exact)))


def test_expression_derivatives_are_finite_differences():
    f = parse_expr("t*sin(t)")
    d = derivative(f, 2)
    assert isinstance(d, FiniteDifference) and not d.is_analytic
    t = 0.7
    assert d(t) == pytest.approx(2 * math.cos(t) - t * math.sin(t), abs=1e-6)


def test_catalog_is_analytic():
    assert sine().is_analytic
    assert not parse_expr("t").is_analytic


def test_combine_normal_form():
    f = combine(sine(), power(2), cosine(), exponential(1.0, 2.0), constant(-1.0), exponential(2.0, 2.0))
    assert f == Sum((Polynomial((-1.0, 0.0, 1.0)), Fourier((1.0,), (1.0,)), Exponential(3.0, 2.0)))
    assert combine(sine(), fourier(sin=(-1.0,))) == constant(0.0)


@given(st.floats(-5.0, 5.0))
def test_sum_evaluates_termwise(t):
    f = combine(*CATALOG_CASES[:6])
    expected = sum(g(t) for g in CATALOG_CASES[:6])
    assert f(t) == pytest.approx(expected, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("sin", sine()),
        ("exp", exponential()),
        ("const:7", constant(7.0)),
        ("7", constant(7.0)),
        ("power:3", power(3)),
        ("t^3", power(3)),
        ("poly:1,0,2", polynomial(1.0, 0.0, 2.0)),
        ("fourier:1,0.5;0,0.2", fourier((1.0, 0.5), (0.0, 0.2))),
        ("sin(3*t) - 2*cos(t)", fourier(sin=(0.0, 0.0, 1.0), cos=(-2.0,))),
        ("exp(2*t + 1)", Exponential(math.exp(1.0), 2.0)),
        ("(t + 1)^2 / 2", polynomial(0.5, 1.0, 0.5)),
        ("sin(-t)", fourier(sin=(-1.0,))),
    ],
)
def test_resolve_lowers_to_catalog(text, expected):
    assert resolve(text) == expected


@pytest.mark.parametrize("text", ["sin(t)*t", "exp(t^2)", "sqrt(t)", "sin(0.5*t)", "abs(t)"])
def test_resolve_keeps_other_expressions(text):
    f = resolve(text)
    assert isinstance(f, Expression)
    assert f(1.3) == pytest.approx(parse_expr(text)(1.3))


@given(st.integers(0, 2**32 - 1))
def test_lowering_preserves_values(seed):
    tree = random_expression(random.Random(seed), 3)
    src = to_source(tree)
    t = np.linspace(0.2, 2.0, 5)
    try:
        with np.errstate(all="ignore"):
            ref = parse_expr(src)(t)
            lowered = resolve(src)(t)
    except DomainError:
        return
    ref = np.broadcast_to(ref, t.shape)
    ok = np.isfinite(ref) & (np.abs(ref) < 1e8)
    np.testing.assert_allclose(np.broadcast_to(lowered, t.shape)[ok], ref[ok], rtol=1e-9, atol=1e-9)


# }}}


# {{{ samples


def test_samples_interpolate_and_reject_outside_hull():
    s = Samples(np.linspace(0.0, 1.0, 11), np.linspace(0.0, 2.0, 11))
    np.testing.assert_allclose(s(np.array([0.05, 0.5, 1.0])), [0.1, 1.0, 2.0])
    with pytest.raises(DomainError):
        s(1.01)
    with pytest.raises(DomainError):
        s(-0.5)


def test_samples_validation():
    with pytest.raises(ValueError):
        Samples([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        Samples([0.0], [1.0])


# }}}
