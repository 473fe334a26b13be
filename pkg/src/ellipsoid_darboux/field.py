"""Polynomial vector fields, Lie derivatives and the on-surface predicate."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poly import MINUS_INFINITY, CoordinateMismatchError, MultiPoly
from .surface import Ellipsoid, normal_form

__all__ = [
    "VectorField",
    "DegreeVector",
    "OnSurfaceCertificate",
    "lie_derivative",
    "lie_iterate",
    "degree_vector",
    "on_surface_check",
]


class VectorField:
    """``X = sum P_i d/dx_i`` with one component per coordinate."""

    __slots__ = ("coordinates", "components")

    def __init__(self, components: Sequence[MultiPoly], coordinates: Sequence[str] | None = None):
        components = tuple(components)
        if not components:
            raise ValueError("a vector field needs at least one component")
        if coordinates is None:
            coordinates = components[0].coords
        coordinates = tuple(coordinates)
        if len(components) != len(coordinates):
            raise CoordinateMismatchError("need exactly one component per coordinate")
        for p in components:
            if p.coords != coordinates:
                raise CoordinateMismatchError(f"component over {p.coords}, field over {coordinates}")
        self.coordinates = coordinates
        self.components = components

    def __call__(self, f: MultiPoly) -> MultiPoly:
        return lie_derivative(self, f)

    def __getitem__(self, i):
        return self.components[i]

    def __len__(self):
        return len(self.components)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)

    def free_parameters(self) -> set[str]:
        out = set()
        for p in self.components:
            out |= p.free_parameters()
        return out

    def substitute_parameters(self, bindings) -> "VectorField":
        return VectorField([p.substitute_parameters(bindings) for p in self.components], self.coordinates)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.coordinates == other.coordinates and all(
            a == b for a, b in zip(self.components, other.components)
        )

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"d{x}/dt = {p}" for x, p in zip(self.coordinates, self.components))
        return f"VectorField({body})"


def lie_derivative(X: VectorField, f: MultiPoly) -> MultiPoly:
    if f.coords != X.coordinates:
        raise CoordinateMismatchError(f"polynomial over {f.coords}, field over {X.coordinates}")
    out = MultiPoly.zero(f.coords)
    for x, P in zip(X.coordinates, X.components):
        if P:
            df = f.diff(x)
            if df:
                out = out + P * df
    return out


def lie_iterate(X: VectorField, f: MultiPoly, j: int) -> MultiPoly:
    if j < 0:
        raise ValueError("iteration count must be non-negative")
    for _ in range(j):
        f = lie_derivative(X, f)
    return f


@dataclass(frozen=True)
class DegreeVector:
    """Per-component degrees ``m`` and the non-increasing view ``m_sorted``.

    Zero components have degree ``MINUS_INFINITY``; they sort last.
    """

    m: tuple
    notes: tuple[str, ...] = ()

    @property
    def m_sorted(self) -> tuple:
        return tuple(sorted(self.m, reverse=True))

    @property
    def m1(self):
        return self.m_sorted[0]

    @property
    def last(self):
        return self.m[-1]

    @property
    def degenerate(self) -> bool:
        return all(d is MINUS_INFINITY for d in self.m)

    def positive_part(self) -> tuple[int, ...]:
        """Sorted degrees with zero components dropped (used by bound formulas)."""
        return tuple(d for d in self.m_sorted if d is not MINUS_INFINITY)

    @classmethod
    def of(cls, m) -> "DegreeVector":
        if isinstance(m, DegreeVector):
            return m
        return cls(tuple(m))

    def __str__(self):
        return "(" + ",".join(str(d) for d in self.m) + ")"


def degree_vector(X: VectorField) -> DegreeVector:
    m = []
    notes = []
    for x, P in zip(X.coordinates, X.components):
        d = P.degree()
        m.append(d)
        if d is MINUS_INFINITY:
            notes.append(f"component d{x}/dt is zero")
            continue
        top = P.homogeneous_part(d)
        if all(c.free_parameters() for c in top.terms.values()):
            notes.append(f"degree of d{x}/dt is generic: drops where its top-degree coefficients vanish")
    if all(d is MINUS_INFINITY for d in m):
        notes.append("zero vector field")
    return DegreeVector(tuple(m), tuple(notes))


@dataclass(frozen=True)
class OnSurfaceCertificate:
    """Either a multiplier with ``X(M) = multiplier * M`` or a residual witness."""

    multiplier: MultiPoly | None = None
    witness: MultiPoly | None = None
    lie_of_M: MultiPoly | None = None

    def __post_init__(self):
        if (self.multiplier is None) == (self.witness is None):
            raise ValueError("exactly one of multiplier and witness must be given")

    @property
    def on_surface(self) -> bool:
        return self.multiplier is not None

    def __bool__(self):
        return self.on_surface


def on_surface_check(X: VectorField, E: Ellipsoid) -> OnSurfaceCertificate:
    if X.coordinates != E.coordinates:
        raise CoordinateMismatchError("field and ellipsoid use different coordinates")
    M = E.defining_polynomial
    XM = lie_derivative(X, M)
    q, r = XM.divrem(M)
    if r.is_zero():
        return OnSurfaceCertificate(multiplier=q, lie_of_M=XM)
    residual = normal_form(XM, E)
    if residual.is_zero():
        # cannot happen for a single divisor, kept as a guard
        q = (XM - residual).divrem(M)[0]
        return OnSurfaceCertificate(multiplier=q, lie_of_M=XM)
    return OnSurfaceCertificate(witness=residual, lie_of_M=XM)
