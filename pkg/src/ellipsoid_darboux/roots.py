"""Gaussian-rational roots of univariate polynomials.

Candidates follow the rational root theorem in Z[i]: after clearing
denominators, a root p/q has p dividing the trailing coefficient and q dividing
the leading one.  Gaussian divisors are enumerated from the divisors of the
norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt, lcm

import sympy
from sympy import divisors

from .coeffs import CoeffValue, ParameterError, gaussian
from .poly import UniPoly

__all__ = ["RootReport", "uni_gaussian_roots", "gaussian_divisors", "parametric_linear_roots"]


@dataclass(frozen=True)
class RootReport:
    roots: tuple[tuple[CoeffValue, int], ...]
    residual: UniPoly

    def root_values(self) -> list[CoeffValue]:
        return [r for r, _ in self.roots]

    def __contains__(self, value) -> bool:
        value = CoeffValue.of(value)
        return any(r == value for r, _ in self.roots)


def _gauss_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gauss_divides(d, z) -> bool:
    """Whether the Gaussian integer d divides z."""
    n = d[0] * d[0] + d[1] * d[1]
    # z * conj(d) must be divisible by the norm of d
    re = z[0] * d[0] + z[1] * d[1]
    im = z[1] * d[0] - z[0] * d[1]
    return re % n == 0 and im % n == 0


def _two_squares(n: int):
    """All (u, v) with u^2 + v^2 = n."""
    out = []
    for u in range(isqrt(n) + 1):
        v2 = n - u * u
        v = isqrt(v2)
        if v * v == v2:
            for su in {u, -u}:
                for sv in {v, -v}:
                    out.append((su, sv))
    return out


def gaussian_divisors(z: tuple[int, int]) -> list[tuple[int, int]]:
    """All Gaussian-integer divisors of nonzero ``z`` (all four associates)."""
    norm = z[0] * z[0] + z[1] * z[1]
    if norm == 0:
        raise ValueError("zero has every divisor")
    found = set()
    for dn in divisors(norm):
        for d in _two_squares(dn):
            if _gauss_divides(d, z):
                found.add(d)
    return sorted(found)


def _vanishes_at(z, p, q) -> bool:
    """Whether ``p/q`` is a root of the integral polynomial ``z`` (low degree first).

    Homogeneous Horner evaluation of ``sum z_k p^k q^(n-k)`` in Z[i].
    """
    acc = z[-1]
    qpow = (1, 0)
    for zk in reversed(z[:-1]):
        qpow = _gauss_mul(qpow, q)
        t = _gauss_mul(zk, qpow)
        acc = _gauss_mul(acc, p)
        acc = (acc[0] + t[0], acc[1] + t[1])
    return acc == (0, 0)


def _integral_coeffs(u: UniPoly) -> list[tuple[int, int]]:
    parts = [c.parts() for c in u.coeffs]
    den = lcm(*(q.denominator for p in parts for q in p))
    return [(int(re * den), int(im * den)) for re, im in parts]


def uni_gaussian_roots(u: UniPoly) -> RootReport:
    """Gaussian-rational roots of ``u`` with multiplicities, plus the residual
    factor that has no such roots."""
    if u.is_zero():
        raise ValueError("the zero polynomial has every value as a root")
    if not u.is_parameter_free():
        raise ParameterError("instantiate parameters before extracting roots")
    rest = u
    found: list[tuple[CoeffValue, int]] = []
    zero_mult = 0
    while rest.degree() > 0 and not rest.coeffs[0]:
        rest = UniPoly(rest.variable, rest.coeffs[1:])
        zero_mult += 1
    if zero_mult:
        found.append((CoeffValue(0), zero_mult))
    if rest.degree() > 0:
        z = _integral_coeffs(rest)
        g = gcd(*(v for c in z for v in c))
        z = [(a // g, b // g) for a, b in z]
        nums = gaussian_divisors(z[0])
        dens = [d for d in gaussian_divisors(z[-1]) if d[0] > 0 and d[1] >= 0]
        for q in dens:
            for p in nums:
                mult = 0
                while rest.degree() > 0 and _vanishes_at(z, p, q):
                    cand = CoeffValue(gaussian(*p)) / CoeffValue(gaussian(*q))
                    rest = rest.deflate(cand)
                    z = _integral_coeffs(rest) if rest.degree() > 0 else z
                    mult += 1
                if mult:
                    found.append((cand, mult))
    found.sort(key=lambda rm: rm[0].parts())
    return RootReport(tuple(found), rest.monic())


def parametric_linear_roots(u: UniPoly) -> list[CoeffValue]:
    """Roots of the factors of ``u`` that are linear in its variable, when the
    coefficients depend on parameters.

    Factoring over Q(i)[params, t] is delegated to sympy; every root returned is
    exact in the parameter field and should still be verified by the caller.
    """
    if u.is_zero():
        raise ValueError("the zero polynomial has every value as a root")
    K = next((c._K for c in u.coeffs if c._K is not None), None)
    if K is None:
        return uni_gaussian_roots(u).root_values()
    t = sympy.Symbol("_t")
    expr = sum(c._in(K).as_expr() * t**k for k, c in enumerate(u.coeffs))
    num, _ = sympy.fraction(sympy.together(expr))
    _, factors = sympy.factor_list(sympy.expand(num), extension=sympy.I)
    out: list[CoeffValue] = []
    for fac, _mult in factors:
        poly = sympy.Poly(fac, t)
        if poly.degree() != 1:
            continue
        c1, c0 = poly.all_coeffs()
        root = CoeffValue(K.from_expr(-c0 / c1), K)
        if not any(root == r for r in out):
            out.append(root)
    return out
