import random
import zlib
from fractions import Fraction

import pytest
import sympy

from ellipsoid_darboux.coeffs import CoeffValue, gaussian
from ellipsoid_darboux.parser import ExpressionContext, parse_expression
from ellipsoid_darboux.poly import MultiPoly
from ellipsoid_darboux.surface import Ellipsoid

COORDS = ("x", "y", "z")
PARAMS = ("a", "a020", "b", "c", "k001", "k2")
CTX = ExpressionContext(COORDS, PARAMS)

# property suites use this many seeded instances each
N_CASES = 100


def P(src: str, ctx: ExpressionContext = CTX) -> MultiPoly:
    return parse_expression(src, ctx)


def C(src: str, ctx: ExpressionContext = CTX) -> CoeffValue:
    return P(src, ctx).constant_term()


def to_sympy(p: MultiPoly) -> sympy.Expr:
    """Independent route into sympy: rebuild the expression term by term."""
    syms = sympy.symbols(p.coords)
    total = sympy.Integer(0)
    for m, c in p.terms.items():
        coeff = _gauss_expr(c) if c._K is None else c.numerator.as_expr() / c.denominator.as_expr()
        mono = sympy.Integer(1)
        for s, e in zip(syms, m):
            mono *= s**e
        total += coeff * mono
    return sympy.expand(total)


def _gauss_expr(c: CoeffValue):
    re, im = c.parts()
    return sympy.Rational(re.numerator, re.denominator) + sympy.I * sympy.Rational(im.numerator, im.denominator)


def sympy_equal(a, b) -> bool:
    return sympy.simplify(sympy.expand(a - b)) == 0


def rand_gaussian(rng: random.Random, lo=-4, hi=4, complex_prob=0.3) -> CoeffValue:
    re = Fraction(rng.randint(lo, hi), rng.randint(1, 3))
    im = Fraction(rng.randint(lo, hi), rng.randint(1, 3)) if rng.random() < complex_prob else 0
    return CoeffValue(gaussian(re, im))


def rand_poly(rng: random.Random, coords=COORDS, degree=3, nterms=4, coeff=rand_gaussian) -> MultiPoly:
    terms = {}
    for _ in range(rng.randint(0, nterms)):
        d = rng.randint(0, degree)
        exps = [0] * len(coords)
        for _ in range(d):
            exps[rng.randrange(len(coords))] += 1
        terms[tuple(exps)] = coeff(rng)
    return MultiPoly(coords, terms)


def rand_rational_ellipsoid(rng: random.Random, coords=COORDS) -> Ellipsoid:
    axes = [CoeffValue(Fraction(rng.randint(1, 5), rng.randint(1, 3))) for _ in coords]
    return Ellipsoid(coords, axes)


@pytest.fixture
def rng(request):
    return random.Random(zlib.crc32(request.node.name.encode()))


@pytest.fixture(scope="session")
def symbolic_ellipsoid():
    return Ellipsoid(COORDS, [C("a"), C("b"), C("c")])
