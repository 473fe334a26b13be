"""Darboux relations, first integrals / invariants and their real forms.

The counting bounds live in :mod:`ellipsoid_darboux.bounds` and are
re-exported here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .bounds import (
    BoundReport,
    Thresholds,
    ThresholdVerdict,
    bound_hyperplanes_Rn,
    bound_meridians,
    bound_parallels,
    check_threshold,
    integrability_thresholds,
)
from .coeffs import CoeffValue
from .field import VectorField, lie_derivative
from .invariants import ExponentialFactor, InvariantHypersurface
from .linalg import nullspace
from .poly import MultiPoly
from .surface import Ellipsoid, normal_form

__all__ = [
    "DarbouxRelation",
    "DarbouxFunction",
    "RealForm",
    "ExpRealForm",
    "RelationVerificationError",
    "solve_relation",
    "build_darboux_function",
    "realify_pair",
    "realify_exp_pair",
    "BoundReport",
    "Thresholds",
    "ThresholdVerdict",
    "bound_hyperplanes_Rn",
    "bound_meridians",
    "bound_parallels",
    "integrability_thresholds",
    "check_threshold",
]


class RelationVerificationError(ValueError):
    pass


def _reduce(p: MultiPoly, E: Ellipsoid | None) -> MultiPoly:
    return normal_form(p, E) if E is not None else p


@dataclass(frozen=True)
class DarbouxRelation:
    """``sum lambdas_i K_i + sum mus_j L_j + sigma = 0``."""

    lambdas: tuple[CoeffValue, ...]
    mus: tuple[CoeffValue, ...]
    sigma: CoeffValue

    def __post_init__(self):
        if all(c.is_zero() for c in (*self.lambdas, *self.mus)):
            raise ValueError("a Darboux relation needs some nonzero exponent")

    @property
    def is_first_integral(self) -> bool:
        return self.sigma.is_zero()

    @property
    def sigma_flag(self) -> str | None:
        """Why sigma cannot be read as a real time rate, if it cannot."""
        if self.sigma.is_zero():
            return None
        if not self.sigma.is_real():
            return "complex sigma"
        return None

    def combination(self, K: Sequence[MultiPoly], L: Sequence[MultiPoly], coords) -> MultiPoly:
        total = MultiPoly.constant(coords, self.sigma)
        for lam, k in zip(self.lambdas, K):
            total = total + k * lam
        for mu, l in zip(self.mus, L):
            total = total + l * mu
        return total

    def verify(self, K, L, E: Ellipsoid | None = None) -> bool:
        coords = (list(K) + list(L))[0].coords
        return _reduce(self.combination(K, L, coords), E).is_zero()


def solve_relation(
    K: Sequence[MultiPoly],
    L: Sequence[MultiPoly] = (),
    E: Ellipsoid | None = None,
    allow_sigma: bool = False,
) -> list[DarbouxRelation]:
    """Basis of all (lambda, mu[, sigma]) with ``sum lambda K + sum mu L + sigma = 0``.

    Each basis vector is scaled so its first nonzero lambda/mu equals 1.
    """
    K, L = list(K), list(L)
    if not K and not L:
        raise ValueError("need at least one cofactor")
    polys = [_reduce(p, E) for p in K + L]
    coords = polys[0].coords
    ncols = len(polys) + (1 if allow_sigma else 0)
    zero = (0,) * len(coords)
    keys = sorted({m for p in polys for m in p.terms} | ({zero} if allow_sigma else set()))
    rows = []
    for m in keys:
        row = [p.coefficient(m) for p in polys]
        if allow_sigma:
            row.append(CoeffValue(1 if m == zero else 0))
        rows.append(row)
    basis = nullspace(rows, ncols) if rows else [
        [CoeffValue(1 if i == j else 0) for i in range(ncols)] for j in range(len(polys))
    ]
    out = []
    for v in basis:
        head = v[: len(polys)]
        lead = next((c for c in head if c), None)
        if lead is None:
            continue
        v = [c / lead for c in v]
        sigma = v[-1] if allow_sigma else CoeffValue(0)
        rel = DarbouxRelation(tuple(v[: len(K)]), tuple(v[len(K) : len(polys)]), sigma)
        if not rel.verify(K, L, E):
            raise AssertionError("relation failed re-verification")
        out.append(rel)
    return out


@dataclass(frozen=True)
class RealForm:
    """``[(Re f)^2 + (Im f)^2]^{Re lambda} * exp(-2 Im lambda * arctan(Im f / Re f))``."""

    re_f: MultiPoly
    im_f: MultiPoly
    re_lambda: CoeffValue
    im_lambda: CoeffValue

    @property
    def modulus_squared(self) -> MultiPoly:
        return self.re_f * self.re_f + self.im_f * self.im_f

    @property
    def has_arctan(self) -> bool:
        return bool(self.im_lambda) and bool(self.im_f)

    @property
    def trivial(self) -> bool:
        return self.im_f.is_zero() and self.im_lambda.is_zero()

    def render(self) -> str:
        base = f"(({self.re_f})^2 + ({self.im_f})^2)^({self.re_lambda})"
        if self.has_arctan:
            base += f"*exp(-2*({self.im_lambda})*arctan(({self.im_f})/({self.re_f})))"
        return base


@dataclass(frozen=True)
class ExpRealForm:
    """``exp(numerator / denominator)``, the real factor of a conjugate
    exponential pair with both polynomials real."""

    numerator: MultiPoly
    denominator: MultiPoly

    @property
    def trivial(self) -> bool:
        return self.numerator.is_zero()

    def render(self) -> str:
        return f"exp(({self.numerator})/({self.denominator}))"


def realify_pair(f: MultiPoly, lam) -> RealForm:
    """Real factor ``f^lambda * conj(f)^conj(lambda)``.

    Parameters are real, so Re/Im act on the numeric part of each coefficient.
    A real ``f`` with real ``lambda`` gives the trivial form ``(f^2)^lambda``.
    """
    lam = CoeffValue.of(lam)
    return RealForm(f.real_part(), f.imag_part(), lam.real_part(), lam.imag_part())


def realify_exp_pair(mu, g: MultiPoly, h: MultiPoly) -> ExpRealForm:
    """``exp(mu g/h) * exp(conj(mu) conj(g)/conj(h)) = exp(2 Re(mu g/h))``."""
    if h.is_zero():
        raise ValueError("h must be nonzero")
    mu = CoeffValue.of(mu)
    hb = h.conjugate()
    num = (g * hb * mu).real_part() * 2
    den = h * hb
    return ExpRealForm(num, den)


@dataclass(frozen=True)
class DarbouxFunction:
    """Structured ``prod f_i^lambda_i * prod exp(g_j/h_j)^mu_j * exp(sigma t)``.

    Real exponents are rendered as ``|f|^lambda``; this is a printing directive
    only.
    """

    factors: tuple[tuple[object, CoeffValue], ...]
    time_exponent: CoeffValue
    realified: tuple[object, ...] = ()
    transcript: tuple[str, ...] = ()
    flags: tuple[str, ...] = field(default_factory=tuple)

    @property
    def is_first_integral(self) -> bool:
        return self.time_exponent.is_zero()

    def polynomial(self) -> MultiPoly | None:
        """The product as a polynomial when every exponent is a non-negative
        integer and there are no exponential factors, else None."""
        out = None
        for base, lam in self.factors:
            if not isinstance(base, MultiPoly):
                return None
            try:
                re, im = lam.parts()
            except ValueError:
                return None
            if im or re.denominator != 1 or re < 0:
                return None
            term = base ** int(re)
            out = term if out is None else out * term
        if not self.is_first_integral:
            return None
        return out

    def render(self) -> str:
        parts = []
        for base, lam in self.factors:
            if isinstance(base, MultiPoly):
                bar = lam.is_parameter_free() and lam.is_real()
                b = f"|{base}|" if bar else f"({base})"
                parts.append(b if lam == 1 else f"{b}^({lam})")
            else:
                g, h = base
                parts.append(f"exp(({g})/({h}))" + ("" if lam == 1 else f"^({lam})"))
        if not self.is_first_integral:
            parts.append(f"exp(({self.time_exponent})*t)")
        return "*".join(parts)


def build_darboux_function(
    objects: Sequence[InvariantHypersurface | ExponentialFactor],
    relation: DarbouxRelation,
    X: VectorField,
    E: Ellipsoid | None = None,
) -> DarbouxFunction:
    """Assemble and verify the Darboux function of ``relation``.

    Checks, with denominators cleared, that the logarithmic derivative along X
    equals ``-sigma``.
    """
    hyps = [o for o in objects if isinstance(o, InvariantHypersurface)]
    exps = [o for o in objects if isinstance(o, ExponentialFactor)]
    if len(hyps) != len(relation.lambdas) or len(exps) != len(relation.mus):
        raise ValueError("relation and objects have different lengths")
    coords = X.coordinates
    transcript = []
    K = [h.k for h in hyps]
    L = [e.L for e in exps]
    if not relation.verify(K, L, E):
        raise RelationVerificationError("relation does not annihilate the given cofactors")
    transcript.append("cofactor combination vanishes" + (" on the ellipsoid" if E else ""))

    # sum lam_i X(f_i) F/f_i H + sum mu_j (h X(g) - g X(h)) H/h_j^2 F + sigma F H == 0
    fs = [h.f for h in hyps]
    hs2 = [e.h * e.h for e in exps]
    one = MultiPoly.constant(coords, 1)

    def prod_except(items, skip):
        out = one
        for idx, p in enumerate(items):
            if idx != skip:
                out = out * p
        return out

    F = prod_except(fs, -1)
    H = prod_except(hs2, -1)
    total = F * H * relation.sigma
    for i, (lam, f) in enumerate(zip(relation.lambdas, fs)):
        if lam:
            total = total + lie_derivative(X, f) * prod_except(fs, i) * H * lam
    for j, (mu, e) in enumerate(zip(relation.mus, exps)):
        if mu:
            num = e.h * lie_derivative(X, e.g) - e.g * lie_derivative(X, e.h)
            total = total + num * prod_except(hs2, j) * F * mu
    if not _reduce(total, E).is_zero():
        raise RelationVerificationError("logarithmic derivative identity fails")
    transcript.append(
        "cleared logarithmic derivative plus sigma*prod vanishes" + (" in normal form" if E else " identically")
    )

    factors = [(f, lam) for f, lam in zip(fs, relation.lambdas) if lam]
    factors += [((e.g, e.h), mu) for e, mu in zip(exps, relation.mus) if mu]

    realified = []
    used = set()
    for i, (f, lam) in enumerate(zip(fs, relation.lambdas)):
        if i in used or not lam or f.conjugate() == f:
            continue
        for j in range(i + 1, len(fs)):
            if j in used:
                continue
            fj, lj = fs[j], relation.lambdas[j]
            if fj == f.conjugate() and lj == lam.conjugate():
                realified.append(realify_pair(f, lam))
                used.update((i, j))
                transcript.append(f"conjugate pair ({f}, {fj}) realified")
                break
    flags = []
    if relation.sigma_flag:
        flags.append(relation.sigma_flag)
    return DarbouxFunction(tuple(factors), relation.sigma, tuple(realified), tuple(transcript), tuple(flags))
