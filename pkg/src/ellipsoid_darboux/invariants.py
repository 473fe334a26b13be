"""Invariant hypersurfaces, exponential factors, extactic polynomials and the
meridian / parallel searches on an ellipsoid."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Sequence

from .bounds import BoundReport, bound_meridians, bound_parallels
from .coeffs import CoeffValue
from .field import VectorField, degree_vector, lie_derivative, lie_iterate, on_surface_check
from .linalg import nullspace, rank, solve_linear
from .poly import MINUS_INFINITY, MultiPoly, UniPoly, poly_det
from .roots import parametric_linear_roots, uni_gaussian_roots
from .surface import Ellipsoid, TangencyVerdict, hyperplane_tangency, normal_form, rewrite_square

__all__ = [
    "AMBIENT",
    "ON_SURFACE",
    "Cofactor",
    "Transversality",
    "InvariantHypersurface",
    "ExponentialFactor",
    "Rejection",
    "ExtacticReport",
    "DependentBasisError",
    "NotOnSurfaceError",
    "MeridianSearch",
    "ParallelSearch",
    "monomials_up_to",
    "solve_multiplier",
    "cofactor_solve",
    "invariance_check",
    "exp_factor_check",
    "extactic",
    "multiplicity",
    "find_meridians",
    "find_parallels",
    "normalize_form",
]

AMBIENT = "ambient"
ON_SURFACE = "on-surface"


class DependentBasisError(ValueError):
    """The extactic basis is linearly dependent; ``relation`` certifies it."""

    def __init__(self, rank: int, relation: list[CoeffValue]):
        self.rank = rank
        self.relation = relation
        super().__init__(f"basis is linearly dependent (rank {rank}); relation {[str(c) for c in relation]}")


class NotOnSurfaceError(ValueError):
    def __init__(self, witness: MultiPoly):
        self.witness = witness
        super().__init__(f"vector field is not tangent to the ellipsoid; normal form of X(M) is {witness}")


@dataclass(frozen=True)
class Cofactor:
    k: MultiPoly
    degree_bound: int
    context: str = AMBIENT


class Transversality(str, enum.Enum):
    VERIFIED = "verified"
    TANGENT_REJECTED = "tangent_rejected"
    UNCHECKED = "unchecked"


@dataclass(frozen=True)
class InvariantHypersurface:
    f: MultiPoly
    cofactor: Cofactor
    transversality: Transversality = Transversality.UNCHECKED
    multiplicity: int | None = None
    tangency: TangencyVerdict | None = None

    @property
    def k(self) -> MultiPoly:
        return self.cofactor.k


@dataclass(frozen=True)
class ExponentialFactor:
    g: MultiPoly
    h: MultiPoly
    L: MultiPoly
    context: str = AMBIENT


@dataclass(frozen=True)
class Rejection:
    """A negative answer; falsy so ``if invariance_check(...)`` reads naturally."""

    reason: str
    f: MultiPoly | None = None
    detail: object = None

    def __bool__(self):
        return False


@dataclass(frozen=True)
class ExtacticReport:
    basis: tuple[MultiPoly, ...]
    E_W: MultiPoly
    factors_found: tuple[tuple[MultiPoly, int], ...]
    residual: MultiPoly
    degenerate: bool
    reduced: MultiPoly | None = None

    def product_check(self) -> bool:
        """Found factor powers times the residual reproduce E_W."""
        if self.degenerate:
            return self.residual.is_zero()
        prod = self.residual
        for f, k in self.factors_found:
            prod = prod * f**k
        return prod.ratio_to(self.E_W) is not None


# -- cofactors ---------------------------------------------------------------


def monomials_up_to(nvars: int, degree: int, surface: bool = False) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= ``degree``; with ``surface`` only
    those of last exponent <= 1."""
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            if surface and e[-1] > 1:
                continue
            out.append(tuple(e))
    return out


def _default_bound(X: VectorField) -> int:
    m1 = degree_vector(X).m1
    return 0 if m1 is MINUS_INFINITY else max(m1 - 1, 0)


def solve_multiplier(target: MultiPoly, base: MultiPoly, degree: int, E: Ellipsoid | None = None) -> MultiPoly | None:
    """The polynomial k of degree <= ``degree`` with ``target = k * base``
    (modulo the ellipsoid when given), or None.

    With an ellipsoid, k is taken in normal form, which makes it unique.
    """
    coords = target.coords
    mons = monomials_up_to(len(coords), degree, surface=E is not None)
    reduce = (lambda p: normal_form(p, E)) if E is not None else (lambda p: p)
    target = reduce(target)
    cols = [reduce(base * MultiPoly.monomial(coords, u)) for u in mons]
    keys = set(target.terms)
    for c in cols:
        keys.update(c.terms)
    keys = sorted(keys)
    rows = [[c.coefficient(key) for c in cols] for key in keys]
    rhs = [target.coefficient(key) for key in keys]
    if not rows:
        return MultiPoly.zero(coords)
    sol = solve_linear(rows, rhs)
    if sol is None:
        return None
    return MultiPoly(coords, dict(zip(mons, sol)))


def cofactor_solve(X: VectorField, f: MultiPoly, context: Ellipsoid | None = None, degree_bound: int | None = None) -> Cofactor | None:
    """Cofactor k with ``X(f) = k f`` (on the ellipsoid when one is given)."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    bound = _default_bound(X) if degree_bound is None else degree_bound
    k = solve_multiplier(lie_derivative(X, f), f, bound, context)
    if k is None:
        return None
    return Cofactor(k, bound, AMBIENT if context is None else ON_SURFACE)


def _linear_tangency(f: MultiPoly, E: Ellipsoid) -> TangencyVerdict:
    c, const = f.linear_form()
    return hyperplane_tangency(c, -const, E)


def invariance_check(X: VectorField, f: MultiPoly, E: Ellipsoid | None = None, degree_bound: int | None = None):
    """An :class:`InvariantHypersurface` certificate or a :class:`Rejection`."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if E is not None and normal_form(f, E).is_zero():
        return Rejection("f vanishes identically on the ellipsoid", f)
    cof = cofactor_solve(X, f, E, degree_bound)
    if cof is None:
        bound = _default_bound(X) if degree_bound is None else degree_bound
        return Rejection(f"no cofactor of degree <= {bound}", f)
    # independent re-verification of the certificate
    residual = lie_derivative(X, f) - cof.k * f
    if E is not None:
        residual = normal_form(residual, E)
    if residual:
        raise AssertionError(f"cofactor failed re-verification for {f}")
    if E is None or f.degree() != 1:
        return InvariantHypersurface(f, cof, Transversality.UNCHECKED)
    verdict = _linear_tangency(f, E)
    if verdict.is_tangent:
        inv = InvariantHypersurface(f, cof, Transversality.TANGENT_REJECTED, tangency=verdict)
        return Rejection("hyperplane is tangent to the ellipsoid", f, inv)
    return InvariantHypersurface(f, cof, Transversality.VERIFIED, tangency=verdict)


def exp_factor_check(X: VectorField, g: MultiPoly, h: MultiPoly, E: Ellipsoid | None = None, degree_bound: int | None = None):
    """Cofactor L of ``exp(g/h)``: solves ``h X(g) - g X(h) = L h^2``."""
    if h.is_zero():
        raise ValueError("h must be nonzero")
    bound = _default_bound(X) if degree_bound is None else degree_bound
    target = h * lie_derivative(X, g) - g * lie_derivative(X, h)
    L = solve_multiplier(target, h * h, bound, E)
    if L is None:
        return Rejection(f"no exponential cofactor of degree <= {bound}", g, h)
    return ExponentialFactor(g, h, L, AMBIENT if E is None else ON_SURFACE)


# -- extactic polynomials ------------------------------------------------------


def _coefficient_rows(W: Sequence[MultiPoly]):
    keys = sorted({m for w in W for m in w.terms})
    # one row per monomial, one column per basis element
    return [[w.coefficient(m) for w in W] for m in keys]


def extactic(X: VectorField, W: Sequence[MultiPoly], E: Ellipsoid | None = None, candidates: Sequence[MultiPoly] = ()) -> ExtacticReport:
    """``det [X^j(v_i)]`` for the basis ``W``.

    ``candidates`` (default: the coordinate hyperplanes) are tested as factors;
    with ``E`` the normal form of the determinant is stored as well.
    """
    W = tuple(W)
    if not W:
        raise ValueError("basis must be non-empty")
    rows = _coefficient_rows(W)
    r = rank(rows)
    if r < len(W):
        raise DependentBasisError(r, nullspace(rows, len(W))[0])
    mat = [[lie_iterate(X, v, j) for v in W] for j in range(len(W))]
    EW = poly_det(mat)
    reduced = normal_form(EW, E) if E is not None else None
    if EW.is_zero():
        return ExtacticReport(W, EW, (), EW, True, reduced)
    if not candidates:
        candidates = [MultiPoly.var(X.coordinates, x) for x in X.coordinates]
    found = []
    rest = EW
    for f in candidates:
        if f.is_constant():
            continue
        k = rest.multiplicity_of(f)
        if k:
            found.append((f, k))
            for _ in range(k):
                rest = rest.exquo(f)
    return ExtacticReport(W, EW, tuple(found), rest, False, reduced)


def multiplicity(f: MultiPoly, report: ExtacticReport) -> int:
    if report.degenerate:
        raise ValueError("extactic polynomial is identically zero")
    k = report.E_W.multiplicity_of(f)
    if k == 0:
        raise ValueError(f"{f} does not divide the extactic polynomial")
    return k


# -- meridians and parallels --------------------------------------------------


def normalize_form(f: MultiPoly) -> MultiPoly:
    """Scale so the coefficient of the first coordinate present is 1."""
    c, const = f.linear_form()
    lead = next((v for v in c if v), None)
    if lead is None:
        lead = const
    return f / lead


@dataclass
class _Found:
    form: MultiPoly
    certificate: InvariantHypersurface
    real: bool
    ambient_divides: bool


@dataclass(frozen=True)
class MeridianSearch:
    report: ExtacticReport
    meridians: tuple[InvariantHypersurface, ...]
    real: tuple[bool, ...]
    ambient_divides: tuple[bool, ...]
    rejected: tuple[Rejection, ...]
    degenerate: bool
    bound: BoundReport
    pencil: UniPoly | None = None
    residual: UniPoly | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def forms(self) -> list[MultiPoly]:
        return [m.f for m in self.meridians]

    @property
    def real_meridians(self) -> list[InvariantHypersurface]:
        return [m for m, r in zip(self.meridians, self.real) if r]


@dataclass(frozen=True)
class ParallelSearch:
    report: ExtacticReport
    parallels: tuple[InvariantHypersurface, ...]
    real: tuple[bool, ...]
    rejected: tuple[Rejection, ...]
    degenerate: bool
    bound: BoundReport
    pencil: UniPoly | None = None
    residual: UniPoly | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def levels(self) -> list[CoeffValue]:
        """The constants c of the invariant planes ``x_{n+1} = c``."""
        return [-p.f.constant_term() for p in self.parallels]


def _require_on_surface(X: VectorField, E: Ellipsoid):
    cert = on_surface_check(X, E)
    if not cert.on_surface:
        raise NotOnSurfaceError(cert.witness)


def _pencil_gcd(polys: Sequence[MultiPoly], t: str, coords: Sequence[str]) -> UniPoly:
    """gcd over all coefficient polynomials in ``t`` after collecting ``coords``."""
    g = UniPoly(t, [])
    for p in polys:
        for part in p.collect(coords).values():
            u = part.as_unipoly(t)
            g = u if g.is_zero() else g.gcd(u)
            if g.degree() == 0:
                return g.monic()
    return g.monic()


def _parametric(X: VectorField, E: Ellipsoid) -> bool:
    return bool(X.free_parameters()) or not all(a.is_parameter_free() for a in E.semi_axes)


def _is_real_form(f: MultiPoly) -> bool:
    return all(c.is_real() for c in f.terms.values())


def _verify(X, E, f, found: list, rejected: list, EW: MultiPoly, degree_bound):
    f = normalize_form(f)
    if any(g.form == f for g in found):
        return
    res = invariance_check(X, f, E, degree_bound)
    if res:
        found.append(_Found(f, res, _is_real_form(f), f.divides(EW)))
    else:
        rejected.append(res)


def _sorted_found(found: list[_Found]) -> list[_Found]:
    return sorted(found, key=lambda g: str(g.form))


def find_meridians(
    X: VectorField,
    E: Ellipsoid,
    candidates: Sequence[MultiPoly] = (),
    degree_bound: int | None = None,
) -> MeridianSearch:
    """Invariant hyperplanes through the last coordinate axis.

    For n = 2 the pencil ``y = t x`` is resolved exactly (Gaussian-rational
    roots, or linear factors over the parameter field); for n >= 3 only
    ``candidates`` are verified.
    """
    _require_on_surface(X, E)
    coords = X.coordinates
    n = E.dimension
    W = [MultiPoly.var(coords, x) for x in coords[:n]]
    report = extactic(X, W, E, candidates=list(candidates) or None)
    bound = bound_meridians(n, degree_vector(X))
    notes: list[str] = []
    if report.degenerate:
        notes.append("extactic polynomial vanishes identically: not finitely many invariant meridians")
        return MeridianSearch(report, (), (), (), (), True, bound, notes=tuple(notes))
    found: list[_Found] = []
    rejected: list[Rejection] = []
    pencil = residual = None
    EW = report.E_W
    for f in candidates:
        _verify(X, E, f, found, rejected, EW, degree_bound)
    if n == 2:
        x, y, z = coords
        t = "_t"
        ext = coords + (t,)
        lift = lambda p: p.with_coords(ext)
        xv, tv = MultiPoly.var(ext, x), MultiPoly.var(ext, t)
        sub = {y: tv * xv}
        cond = lift(report.reduced).subst(sub)
        if cond.is_zero():
            # reduced extactic is zero: fall back to the direct invariance condition
            P1, P2 = (lift(normal_form(p, E)) for p in X.components[:2])
            cond = (P2 - tv * P1).subst(sub)
            notes.append("reduced extactic vanishes; pencil resolved from the invariance condition")
        pencil = _pencil_gcd([cond], t, (x, y, z))
        if pencil.is_zero():
            notes.append("every meridian of the pencil is invariant: not finitely many")
            return MeridianSearch(report, (), (), (), (), True, bound, notes=tuple(notes))
        if _parametric(X, E):
            notes.append("parametric system: pencil computed for generic parameter values")
        if not pencil.is_parameter_free():
            notes.append("pencil depends on parameters: linear factors found by parametric factorization")
            for r in parametric_linear_roots(pencil):
                form = MultiPoly.var(coords, y) - MultiPoly.var(coords, x) * r
                _verify(X, E, form, found, rejected, EW, degree_bound)
            for axis in (x, y):
                _verify(X, E, MultiPoly.var(coords, axis), found, rejected, EW, degree_bound)
        else:
            if pencil.degree() > 0:
                roots = uni_gaussian_roots(pencil)
                residual = roots.residual
                if residual.degree() > 0:
                    notes.append(f"pencil factor without Gaussian-rational roots: {residual}")
                for r, _ in roots.roots:
                    form = MultiPoly.var(coords, y) - MultiPoly.var(coords, x) * r
                    _verify(X, E, form, found, rejected, EW, degree_bound)
            for axis in (x, y):
                _verify(X, E, MultiPoly.var(coords, axis), found, rejected, EW, degree_bound)
    else:
        notes.append("n >= 3: only caller-supplied candidates were verified; factor E_W externally")
    found = _sorted_found(found)
    if bound.value is not None and len(found) > bound.value:
        raise AssertionError(f"{len(found)} meridians exceed the bound {bound.value}")
    return MeridianSearch(
        report,
        tuple(g.certificate for g in found),
        tuple(g.real for g in found),
        tuple(g.ambient_divides for g in found),
        tuple(rejected),
        False,
        bound,
        pencil,
        residual,
        tuple(notes),
    )


def find_parallels(
    X: VectorField,
    E: Ellipsoid,
    candidates: Sequence[MultiPoly] = (),
    degree_bound: int | None = None,
) -> ParallelSearch:
    """Invariant hyperplanes ``x_{n+1} = c`` transversal to the ellipsoid."""
    _require_on_surface(X, E)
    coords = X.coordinates
    z = coords[-1]
    zv = MultiPoly.var(coords, z)
    report = extactic(X, [MultiPoly.constant(coords, 1), zv], E, candidates=[zv])
    bound = bound_parallels(degree_vector(X))
    notes: list[str] = []
    if report.degenerate or report.reduced.is_zero():
        notes.append("last component vanishes on the ellipsoid: every parallel is invariant")
        return ParallelSearch(report, (), (), (), True, bound, notes=tuple(notes))
    found: list[_Found] = []
    rejected: list[Rejection] = []
    pencil = residual = None
    EW = report.E_W
    for f in candidates:
        _verify(X, E, f, found, rejected, EW, degree_bound)
    # restrict to x_{n+1} = t: reduce x_n^2 on the section ellipsoid
    xn = coords[-2]
    a_n2 = E.semi_axes[-2] ** 2
    square = MultiPoly.constant(coords, a_n2) - zv**2 * (a_n2 / E.semi_axes[-1] ** 2)
    for xi, ai in zip(coords[:-2], E.semi_axes[:-2]):
        square = square - MultiPoly.var(coords, xi) ** 2 * (a_n2 / (ai * ai))
    cond = rewrite_square(report.reduced, xn, square)
    pencil = _pencil_gcd([cond], z, coords[:-1])
    if pencil.is_zero():
        notes.append("every parallel is invariant: not finitely many")
        return ParallelSearch(report, (), (), (), True, bound, notes=tuple(notes))
    if _parametric(X, E):
        notes.append("parametric system: levels computed for generic parameter values")
    if not pencil.is_parameter_free():
        notes.append("level polynomial depends on parameters: linear factors found by parametric factorization")
        for r in parametric_linear_roots(pencil):
            _verify(X, E, zv - r, found, rejected, EW, degree_bound)
    elif pencil.degree() > 0:
        roots = uni_gaussian_roots(pencil)
        residual = roots.residual
        if residual.degree() > 0:
            notes.append(f"level factor without Gaussian-rational roots: {residual}")
        for r, _ in roots.roots:
            _verify(X, E, zv - r, found, rejected, EW, degree_bound)
    found = _sorted_found(found)
    last = degree_vector(X).last
    if last is not MINUS_INFINITY and len(found) > last:
        raise AssertionError(f"{len(found)} parallels exceed the last component degree {last}")
    return ParallelSearch(
        report,
        tuple(g.certificate for g in found),
        tuple(g.real for g in found),
        tuple(rejected),
        False,
        bound,
        pencil,
        residual,
        tuple(notes),
    )
