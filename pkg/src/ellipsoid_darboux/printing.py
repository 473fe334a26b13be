"""Canonical text rendering of coefficients and polynomials.

Output is accepted back by :func:`ellipsoid_darboux.parser.parse_expression`,
and equal values always print identically.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .coeffs import CoeffValue, _as_fraction

__all__ = ["format_coeff", "format_poly", "format_gaussian"]


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_gaussian(re: Fraction, im: Fraction) -> str:
    if im == 0:
        return _fmt_rational(re)
    if im == 1:
        imag = "I"
    elif im == -1:
        imag = "-I"
    else:
        imag = f"{_fmt_rational(im)}*I"
    if re == 0:
        return imag
    sign = "-" if imag.startswith("-") else "+"
    return f"({_fmt_rational(re)} {sign} {imag.lstrip('-')})"


def _monomial_str(names, exps) -> str:
    parts = []
    for n, e in zip(names, exps):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def _grlex_key(exps):
    return (sum(exps), tuple(exps))


def _join(terms: list[tuple[str, str]]) -> str:
    """Join (coefficient text, monomial text) pairs into a signed sum."""
    if not terms:
        return "0"
    out = []
    for idx, (c, m) in enumerate(terms):
        if m == "":
            t = c
        elif c == "1":
            t = m
        elif c == "-1":
            t = "-" + m
        else:
            t = f"{c}*{m}"
        if idx == 0:
            out.append(t)
        elif t.startswith("-"):
            out.append(" - " + t[1:])
        else:
            out.append(" + " + t)
    return "".join(out)


def _gauss_parts(c):
    return _as_fraction(c.x), _as_fraction(c.y)


def _param_poly_terms(poly, names, scale: Fraction):
    items = sorted(poly.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)
    out = []
    for monom, c in items:
        re, im = _gauss_parts(c)
        out.append((format_gaussian(re * scale, im * scale), _monomial_str(names, monom)))
    return out


def _normalized_fraction(value: CoeffValue):
    """Numerator/denominator scaled so the denominator is a primitive integer
    polynomial with positive leading coefficient."""
    num, den = value._v.numer, value._v.denom
    lead = max(den.items(), key=lambda kv: _grlex_key(kv[0]))[1]
    num = num.quo_ground(lead)
    den = den.quo_ground(lead)
    dens = []
    nums = []
    for poly in (num, den):
        for c in poly.values():
            for q in _gauss_parts(c):
                if q:
                    dens.append(q.denominator)
    scale = Fraction(lcm(*dens) if dens else 1)
    for poly in (num, den):
        for c in poly.values():
            for q in _gauss_parts(c):
                if q:
                    nums.append((q * scale).numerator)
    g = gcd(*nums) if nums else 1
    return num, den, scale / g


def format_coeff(value: CoeffValue) -> str:
    if value._K is None:
        return format_gaussian(*_gauss_parts(value._v))
    names = value.params
    num, den, scale = _normalized_fraction(value)
    if den.is_ground:
        return _join(_param_poly_terms(num, names, Fraction(1)))
    ntxt = _join(_param_poly_terms(num, names, scale))
    dterms = _param_poly_terms(den, names, scale)
    dtxt = _join(dterms)
    if len(num) > 1:
        ntxt = f"({ntxt})"
    if any(ch in dtxt for ch in "*+- "):
        dtxt = f"({dtxt})"
    return f"{ntxt}/{dtxt}"


def _is_atomic(text: str) -> bool:
    """True when ``text`` is a product that can be glued with ``*``."""
    depth = 0
    for idx, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and idx > 0:
            return False
    return True


def format_poly(poly) -> str:
    """Render a :class:`MultiPoly` with terms in decreasing monomial order."""
    if poly.is_zero():
        return "0"
    terms = []
    for monom in poly.sorted_monomials(reverse=True):
        c = format_coeff(poly.terms[monom])
        m = _monomial_str(poly.coords, monom)
        if m and not _is_atomic(c):
            c = f"({c})"
        terms.append((c, m))
    return _join(terms)
