import random

import pytest
import sympy

from conftest import COORDS, P, rand_gaussian, to_sympy
from ellipsoid_darboux.catalog import load_system, parse_bindings
from ellipsoid_darboux.field import VectorField
from ellipsoid_darboux.invariants import (
    DependentBasisError,
    ExponentialFactor,
    InvariantHypersurface,
    NotOnSurfaceError,
    Rejection,
    Transversality,
    cofactor_solve,
    exp_factor_check,
    extactic,
    find_meridians,
    find_parallels,
    invariance_check,
    monomials_up_to,
    multiplicity,
)
from ellipsoid_darboux.parser import parse_expression
from ellipsoid_darboux.poly import MultiPoly
from ellipsoid_darboux.surface import Ellipsoid, normal_form


@pytest.fixture(scope="module")
def pp0():
    return load_system("pp0")


@pytest.fixture(scope="module")
def ex2():
    return load_system("ex2")


def _inst(name, text):
    spec = load_system(name, validate=False).spec
    return load_system(spec, instantiate=parse_bindings(text, spec.context))


def test_monomial_counts():
    assert len(monomials_up_to(3, 1)) == 4
    assert len(monomials_up_to(3, 2)) == 10
    assert len(monomials_up_to(3, 2, surface=True)) == 9


def test_cofactor_first_meridian(pp0):
    f = pp0.spec.parse("-I*b*x + a*y")
    cof = cofactor_solve(pp0.field, f, pp0.ellipsoid)
    assert cof.k == pp0.spec.parse("(a*k2*x - I*a020*b*y)/a")
    assert cof.degree_bound == 1


def test_cofactor_third_meridian_up_to_unit(pp0):
    f = pp0.spec.parse("I*a*k2*x + a020*b*y")
    k = cofactor_solve(pp0.field, f, pp0.ellipsoid).k
    printed = pp0.spec.parse("(I*a020*b^3*x + a^3*k2*y)/(a^2*b)")
    assert k == printed * pp0.spec.parse("I")
    # independent check by direct Lie derivative
    assert pp0.field(f) == k * f


def test_constant_has_zero_cofactor(pp0):
    assert cofactor_solve(pp0.field, pp0.spec.parse("1")).k.is_zero()


def test_zero_polynomial_rejected(pp0):
    with pytest.raises(ValueError):
        cofactor_solve(pp0.field, MultiPoly.zero(COORDS))


def test_invariance_check_second_meridian(pp0):
    r = invariance_check(pp0.field, pp0.spec.parse("I*b*x + a*y"), pp0.ellipsoid)
    assert isinstance(r, InvariantHypersurface)
    assert r.k == pp0.spec.parse("-(a*k2*x - I*a020*b*y)/a")
    assert r.transversality is Transversality.VERIFIED


def test_invariant_parallel(ex2):
    r = invariance_check(ex2.field, ex2.spec.parse("z"), ex2.ellipsoid)
    assert r and r.transversality is Transversality.VERIFIED


def test_tangent_plane_rejected():
    # rotation about the z axis leaves the vertex planes z = +-1 invariant
    E = Ellipsoid(COORDS, [1, 1, 1])
    X = VectorField([P("-y"), P("x"), P("0")])
    r = invariance_check(X, P("z - 1"), E)
    assert isinstance(r, Rejection)
    assert r.detail.transversality is Transversality.TANGENT_REJECTED
    assert invariance_check(X, P("z - 1/2"), E)


def test_random_quadratic_field_rejects_shifted_plane():
    """Rejection of ``x + 1`` agrees with a brute-force sympy solve for the cofactor."""
    rng = random.Random(2024)
    sx, sy, sz = sympy.symbols(COORDS)
    ks = sympy.symbols("k0:4")
    f = P("x + 1")
    outcomes = set()
    for trial in range(10):
        comps = [_rand_quadratic(rng) for _ in range(3)]
        if trial % 2:
            # make x + 1 invariant by construction
            comps[0] = f * MultiPoly(COORDS, {e: rand_gaussian(rng) for e in monomials_up_to(3, 1)})
        X = VectorField(comps)
        ours = invariance_check(X, f)
        k = ks[0] + ks[1] * sx + ks[2] * sy + ks[3] * sz
        lhs = sympy.expand(to_sympy(X(f)) - k * (sx + 1))
        eqs = sympy.Poly(lhs, sx, sy, sz).coeffs()
        sol = sympy.solve(eqs, ks, dict=True)
        assert bool(ours) == bool(sol)
        outcomes.add(bool(ours))
    assert outcomes == {True, False}


def _rand_quadratic(rng):
    terms = {}
    for e in monomials_up_to(3, 2):
        terms[e] = rand_gaussian(rng, complex_prob=0.0)
    return MultiPoly(COORDS, terms)


def test_exp_factor_trivial():
    X = VectorField([P("y"), P("-x"), P("0")])
    r = exp_factor_check(X, P("0"), P("1"))
    assert isinstance(r, ExponentialFactor) and r.L.is_zero()


def test_exp_factor_planar_linear():
    coords = ("x", "y")
    X = VectorField([parse_expression("x", coords), parse_expression("y", coords)])
    g = parse_expression("x", coords)
    one = parse_expression("1", coords)
    assert not exp_factor_check(X, g, one)
    r = exp_factor_check(X, g, one, degree_bound=1)
    assert r.L == g


def test_exp_factor_needs_nonzero_h():
    X = VectorField([P("y"), P("-x"), P("0")])
    with pytest.raises(ValueError):
        exp_factor_check(X, P("x"), P("0"))


def test_extactic_parallel_system(ex2):
    rep = extactic(ex2.field, [ex2.spec.parse("1"), ex2.spec.parse("z")], ex2.ellipsoid)
    assert rep.E_W == ex2.spec.parse("(1/2)*(-(2*b002*c^2)/b^2 + k010)*y*z")


def test_extactic_system6():
    s = load_system("quad06")
    rep = extactic(s.field, [s.spec.parse("x"), s.spec.parse("y")])
    assert rep.E_W == s.spec.parse("-a011*y^2*z")
    assert multiplicity(s.spec.parse("y"), rep) == 2
    assert multiplicity(s.spec.parse("z"), rep) == 1
    with pytest.raises(ValueError):
        multiplicity(s.spec.parse("x"), rep)
    assert rep.product_check()


def test_extactic_system7():
    s = load_system("quad07")
    rep = extactic(s.field, [s.spec.parse("x"), s.spec.parse("y")])
    assert rep.E_W == s.spec.parse("b011*x*y*z")


def test_dependent_basis(pp0):
    with pytest.raises(DependentBasisError) as info:
        extactic(pp0.field, [pp0.spec.parse("x"), pp0.spec.parse("2*x")])
    assert info.value.rank == 1


def test_degenerate_extactic():
    X = VectorField([P("x"), P("y"), P("z")])
    rep = extactic(X, [P("x"), P("y")])
    assert rep.degenerate
    with pytest.raises(ValueError):
        multiplicity(P("x"), rep)


def test_meridians_system10_instantiated():
    s = _inst("quad10", "a=1, b=2, c=3, alpha=1, beta=2, b011=1, k4=3, k001=1")
    res = find_meridians(s.field, s.ellipsoid)
    assert set(map(str, res.forms)) == {str(s.spec.parse("x + 2*y")), str(s.spec.parse("y"))}
    assert all(res.real)
    assert len(res.meridians) <= res.bound.value


def test_meridians_system10_parametric():
    s = load_system("quad10")
    res = find_meridians(s.field, s.ellipsoid)
    assert {str(f) for f in res.forms} == {str(s.spec.parse("x + beta/alpha*y")), "y"}


def test_meridians_meridian_system_complex():
    s = _inst("pp0", "a=1, b=2, c=3, k2=1, a020=1, k001=1")
    res = find_meridians(s.field, s.ellipsoid)
    assert len(res.meridians) == 3
    assert sum(res.real) <= 2
    for h in res.meridians:
        assert normal_form(s.field(h.f) - h.k * h.f, s.ellipsoid).is_zero()
        assert h.transversality is Transversality.VERIFIED


def test_meridians_coalesce_for_equal_axes():
    # with a = b and k2 = a020 two of the three meridian forms coincide
    s = _inst("pp0", "a=1, b=1, c=1, k2=1, a020=1, k001=0")
    res = find_meridians(s.field, s.ellipsoid)
    assert len(res.meridians) == 2


def test_meridians_require_surface_field():
    E = Ellipsoid(COORDS, [1, 1, 1])
    X = VectorField([P("1"), P("0"), P("0")])
    with pytest.raises(NotOnSurfaceError):
        find_meridians(X, E)


def test_parallels_single_level(ex2):
    res = find_parallels(ex2.field, ex2.ellipsoid)
    assert [str(h.f) for h in res.parallels] == ["z"]
    assert res.bound.value == 1


def test_parallels_degenerate_when_last_component_zero():
    E = Ellipsoid(COORDS, [1, 1, 1])
    X = VectorField([P("-y"), P("x"), P("0")])
    res = find_parallels(X, E)
    assert res.degenerate and not res.parallels
