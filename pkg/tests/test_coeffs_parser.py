from fractions import Fraction

import pytest

from conftest import CTX, COORDS, C, P, rand_poly
from ellipsoid_darboux.coeffs import CoeffValue, ParameterError, gaussian
from ellipsoid_darboux.parser import ExpressionContext, ParseError, parse_expression
from ellipsoid_darboux.printing import format_coeff, format_gaussian


def test_gaussian_arithmetic():
    i = CoeffValue.i()
    assert i * i == -1
    assert (1 + i) * (1 - i) == 2
    assert (CoeffValue(1) / (1 + i)).parts() == (Fraction(1, 2), Fraction(-1, 2))


def test_parametric_equality_is_by_value():
    assert C("(a^2 - b^2)/(a - b)") == C("a + b")
    assert C("a") != C("b")


def test_parts_refuse_parameters():
    with pytest.raises(ParameterError):
        C("a + 1").parts()


def test_conjugate_keeps_parameters_real():
    v = C("I*a + b")
    assert v.conjugate() == C("-I*a + b")
    assert v.real_part() == C("b") and v.imag_part() == C("a")
    assert not v.is_real() and C("a/b").is_real()


def test_substitute_parameters():
    assert C("a*b + I").substitute({"a": CoeffValue(2), "b": CoeffValue(3)}) == 6 + CoeffValue.i()


@pytest.mark.parametrize(
    "re, im, text",
    [(0, 0, "0"), (Fraction(1, 2), 0, "1/2"), (0, 1, "I"), (0, -1, "-I"), (1, -2, "(1 - 2*I)")],
)
def test_format_gaussian(re, im, text):
    assert format_gaussian(Fraction(re), Fraction(im)) == text


def test_ellipsoid_polynomial_parses():
    M = P("x^2/a^2 + y^2/b^2 + z^2/c^2 - 1")
    assert M.degree() == 2
    assert M.coefficient((2, 0, 0)) == C("1/a^2")
    assert M.constant_term() == -1


def test_meridian_form_parses():
    f = P("-I*b*x + a*y")
    assert f.coefficient((1, 0, 0)) == -CoeffValue.i() * C("b")
    assert f.coefficient((0, 1, 0)) == C("a")


@pytest.mark.parametrize(
    "src, fragment",
    [
        ("x/(y+1)", "coordinate in denominator"),
        ("x/0", "division by zero"),
        ("x^y", "exponent"),
        ("x^(1/2)", "non-negative integer"),
        ("q + 1", "unknown identifier"),
        ("x +", "unexpected end"),
        ("(x", "expected"),
        ("", "empty"),
        ("x $ y", "unexpected"),
    ],
)
def test_parse_errors(src, fragment):
    with pytest.raises(ParseError, match=fragment.split()[0]):
        parse_expression(src, CTX)


def test_context_validation():
    with pytest.raises(ValueError):
        ExpressionContext(("x", "a"), ("a",))
    with pytest.raises(ValueError):
        ExpressionContext(("x", "I"))


def test_power_operators_agree():
    assert P("x**3") == P("x^3") == P("x*x*x")
    assert P("-x^2") == -P("x^2")


def test_printed_polynomial_reparses(rng):
    for _ in range(50):
        p = rand_poly(rng)
        assert parse_expression(str(p), COORDS) == p


def test_printed_parametric_polynomial_reparses():
    for src in ["(I*a*k2*x + a020*b*y)*(-I*b*x + a*y)/(a^2*b)", "k001*z/2 - c^2", "(a + I)/(b - 2*I)*x^2"]:
        p = P(src)
        assert P(str(p)) == p


def test_format_coeff_parametric_fraction():
    text = format_coeff(C("(a + b)/(2*c)"))
    assert C(text) == C("(a + b)/(2*c)")
    assert format_coeff(CoeffValue(gaussian(3, 0))) == "3"
