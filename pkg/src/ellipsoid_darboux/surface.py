"""The ellipsoid as an algebraic surface and reduction modulo its ideal."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .coeffs import CoeffValue
from .poly import CoordinateMismatchError, MultiPoly

__all__ = [
    "Ellipsoid",
    "Tangency",
    "TangencyVerdict",
    "normal_form",
    "rewrite_square",
    "is_normal_form",
    "equal_on_surface",
    "dim_on_surface",
    "hyperplane_tangency",
]


class Ellipsoid:
    """``sum x_i^2 / a_i^2 = 1`` in n+1 coordinates (n >= 2).

    Semi-axes may carry parameters; those are assumed nonzero and listed in
    :attr:`assumptions`.
    """

    __slots__ = ("coordinates", "semi_axes", "_M", "_rhs", "_powers")

    def __init__(self, coordinates: Sequence[str], semi_axes: Sequence):
        coordinates = tuple(coordinates)
        semi_axes = tuple(CoeffValue.of(a) for a in semi_axes)
        if len(coordinates) != len(semi_axes):
            raise ValueError("need one semi-axis per coordinate")
        if len(coordinates) < 3:
            raise ValueError("an ellipsoid needs n >= 2, i.e. at least 3 coordinates")
        for a in semi_axes:
            if a.is_zero():
                raise ValueError("semi-axes must be nonzero")
        self.coordinates = coordinates
        self.semi_axes = semi_axes
        M = MultiPoly.constant(coordinates, -1)
        for x, a in zip(coordinates, semi_axes):
            M = M + MultiPoly.var(coordinates, x) ** 2 / (a * a)
        self._M = M
        # x_{n+1}^2 == rhs on the surface
        last = semi_axes[-1] * semi_axes[-1]
        rhs = MultiPoly.constant(coordinates, last)
        for x, a in zip(coordinates[:-1], semi_axes[:-1]):
            rhs = rhs - MultiPoly.var(coordinates, x) ** 2 * (last / (a * a))
        self._rhs = rhs
        self._powers = [MultiPoly.constant(coordinates, 1), rhs]

    @property
    def dimension(self) -> int:
        return len(self.coordinates) - 1

    @property
    def defining_polynomial(self) -> MultiPoly:
        return self._M

    @property
    def last_square(self) -> MultiPoly:
        """The reduced representative of ``x_{n+1}^2``."""
        return self._rhs

    @property
    def assumptions(self) -> list[str]:
        return [f"{a} != 0" for a in self.semi_axes if not a.is_parameter_free()]

    def substitute_parameters(self, bindings) -> "Ellipsoid":
        return Ellipsoid(self.coordinates, [a.substitute(bindings) for a in self.semi_axes])

    def __repr__(self):
        axes = ", ".join(str(a) for a in self.semi_axes)
        return f"Ellipsoid({self.coordinates}, ({axes}))"


def _check(p: MultiPoly, E: Ellipsoid):
    if p.coords != E.coordinates:
        raise CoordinateMismatchError(f"polynomial over {p.coords}, ellipsoid over {E.coordinates}")


def is_normal_form(p: MultiPoly) -> bool:
    return all(m[-1] <= 1 for m in p.terms)


def rewrite_square(p: MultiPoly, name: str, square: MultiPoly, powers: list | None = None) -> MultiPoly:
    """Replace every ``name^2`` in ``p`` by ``square`` until ``name`` has degree <= 1.

    ``square`` must not involve ``name``.  ``powers`` is an optional cache of
    ``square**q`` (index q) that is extended in place.
    """
    i = p._index(name)
    if all(m[i] <= 1 for m in p.terms):
        return p
    if powers is None:
        powers = [MultiPoly.constant(p.coords, 1), square]
    out = {}
    grouped: dict[int, dict] = {}
    for m, c in p.terms.items():
        if m[i] <= 1:
            out[m] = c
        else:
            q, r = divmod(m[i], 2)
            grouped.setdefault(q, {})[m[:i] + (r,) + m[i + 1 :]] = c
    result = MultiPoly._raw(p.coords, out)
    for q, terms in grouped.items():
        while len(powers) <= q:
            powers.append(powers[-1] * square)
        result = result + MultiPoly._raw(p.coords, terms) * powers[q]
    return result


def normal_form(p: MultiPoly, E: Ellipsoid) -> MultiPoly:
    """Representative of ``p`` modulo the ellipsoid with last-coordinate degree <= 1."""
    _check(p, E)
    return rewrite_square(p, E.coordinates[-1], E.last_square, E._powers)


def equal_on_surface(p: MultiPoly, q: MultiPoly, E: Ellipsoid) -> bool:
    return normal_form(p - q, E).is_zero()


def dim_on_surface(n: int | Ellipsoid, m: int) -> int:
    """Dimension of the degree-<=m polynomials modulo a quadric in ``n`` variables.

    ``n`` counts ambient coordinates; an :class:`Ellipsoid` contributes its
    coordinate count, so the result is the dimension of the restriction space.
    """
    if isinstance(n, Ellipsoid):
        n = len(n.coordinates)
    if m < 0:
        raise ValueError("degree must be non-negative")

    def c(u, v):
        return comb(u, v) if u >= v >= 0 else 0

    return c(n + m, n) - c(n + m - 2, n)


class Tangency(str, enum.Enum):
    TRANSVERSAL = "transversal"
    TANGENT = "tangent"
    EMPTY_REAL = "empty_intersection_over_reals"


@dataclass(frozen=True)
class TangencyVerdict:
    kind: Tangency
    discriminant: CoeffValue
    sign_decided: bool = True
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def is_tangent(self) -> bool:
        return self.kind is Tangency.TANGENT


def _positive_even(v: CoeffValue) -> bool:
    """Numerator and denominator are sums of even monomials with positive
    rational coefficients, so ``v > 0`` for real nonzero parameters."""
    if v.is_parameter_free():
        return False
    for poly in (v.numerator, v.denominator):
        for monom, c in poly.items():
            if c.y or c.x <= 0 or any(e % 2 for e in monom):
                return False
    return True


def hyperplane_tangency(c: Sequence, d, E: Ellipsoid) -> TangencyVerdict:
    """Classify the hyperplane ``sum c_i x_i = d`` against ``E``.

    With ``S = sum a_i^2 c_i^2`` a tangency point exists iff ``S = d^2`` and
    ``S != 0``.  The case ``S = d = 0`` (an isotropic complex plane through the
    centre) has no tangency point and counts as transversal.
    """
    c = [CoeffValue.of(v) for v in c]
    d = CoeffValue.of(d)
    if len(c) != len(E.semi_axes):
        raise CoordinateMismatchError("normal vector length differs from coordinate count")
    if all(v.is_zero() for v in c):
        raise ValueError("zero normal vector")
    S = CoeffValue(0)
    for a, v in zip(E.semi_axes, c):
        S = S + a * a * v * v
    disc = S - d * d
    if disc.is_zero():
        if S.is_zero():
            return TangencyVerdict(Tangency.TRANSVERSAL, disc, True, ("isotropic plane through the centre",))
        return TangencyVerdict(Tangency.TANGENT, disc)
    if disc.is_parameter_free() and disc.is_real():
        re, _ = disc.parts()
        if re > 0:
            return TangencyVerdict(Tangency.TRANSVERSAL, disc)
        if all(v.is_parameter_free() and v.is_real() for v in [*c, d, *E.semi_axes]):
            return TangencyVerdict(Tangency.EMPTY_REAL, disc)
    elif _positive_even(disc):
        note = "discriminant is a positive sum of even powers (real nonzero parameters assumed)"
        return TangencyVerdict(Tangency.TRANSVERSAL, disc, True, (note,))
    note = "non-tangent; real sign not decided for complex or parametric data"
    return TangencyVerdict(Tangency.TRANSVERSAL, disc, False, (note,))
