"""Acceptance gate: nine criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` (the summary lines are written
at the end of the module) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
from math import comb
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import test_properties as props  # noqa: E402
from conftest import COORDS  # noqa: E402
from ellipsoid_darboux.bounds import (  # noqa: E402
    bound_hyperplanes_Rn,
    bound_meridians,
    bound_parallels,
    integrability_thresholds,
)
from ellipsoid_darboux.catalog import catalog_names, load_system, parse_bindings  # noqa: E402
from ellipsoid_darboux.darboux import build_darboux_function, solve_relation  # noqa: E402
from ellipsoid_darboux.field import lie_derivative, on_surface_check  # noqa: E402
from ellipsoid_darboux.invariants import (  # noqa: E402
    Transversality,
    cofactor_solve,
    extactic,
    find_meridians,
    find_parallels,
    invariance_check,
    multiplicity,
)
from ellipsoid_darboux.surface import Ellipsoid, normal_form  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}


class CriterionFailure(AssertionError):
    pass


def check(cond, message):
    if not cond:
        raise CriterionFailure(message)


def _instantiated(name, text):
    spec = load_system(name, validate=False).spec
    return load_system(spec, instantiate=parse_bindings(text, spec.context))


# -- criteria -----------------------------------------------------------------------


def criterion_1():
    pp0, ex2 = load_system("pp0"), load_system("ex2")
    c5 = on_surface_check(pp0.field, pp0.ellipsoid)
    c24 = on_surface_check(ex2.field, ex2.ellipsoid)
    check(c5.on_surface and c5.multiplier == pp0.spec.parse("k001*z"), f"meridian system multiplier {c5.multiplier}")
    check(c24.on_surface and c24.multiplier == ex2.spec.parse("k010*y"), f"parallel system multiplier {c24.multiplier}")
    return "multipliers k001*z and k010*y, exact"


# the three printed identities X(f) = k f of the complex meridian system
PRINTED_COFACTORS = [
    ("-I*b*x + a*y", "(a*k2*x - I*a020*b*y)/a"),
    ("I*b*x + a*y", "-(a*k2*x - I*a020*b*y)/a"),
    ("I*a*k2*x + a020*b*y", "(I*a020*b^3*x + a^3*k2*y)/(a^2*b)"),
]


def criterion_2():
    s = load_system("pp0")
    bad = []
    for i, (f_src, k_src) in enumerate(PRINTED_COFACTORS, 1):
        f, printed = s.spec.parse(f_src), s.spec.parse(k_src)
        cof = cofactor_solve(s.field, f, s.ellipsoid)
        check(cof is not None, f"identity {i}: no cofactor found")
        # dual route: the solved cofactor must satisfy the identity by direct expansion
        check(normal_form(lie_derivative(s.field, f) - cof.k * f, s.ellipsoid).is_zero(), f"identity {i}: solver")
        if cof.k != printed:
            ratio = cof.k.ratio_to(printed)
            printed_holds = normal_form(lie_derivative(s.field, f) - printed * f, s.ellipsoid).is_zero()
            bad.append(f"identity {i}: computed {cof.k}, printed {printed} (computed/printed = {ratio}; printed identity holds on the ellipsoid: {printed_holds})")
    exact = [str(i) for i in range(1, 4) if not any(b.startswith(f"identity {i}:") for b in bad)]
    check(not bad, f"identities {', '.join(exact)} exact; " + "; ".join(bad))
    return "all three identities reproduced exactly"


def criterion_3():
    names = [n for n in catalog_names() if n.startswith("quad")]
    check(len(names) == 18, f"{len(names)} systems in the enumeration")
    notes = []
    for name in names:
        s = load_system(name)
        E = extactic(s.field, [s.spec.parse("x"), s.spec.parse("y")]).E_W
        _, expected_src = s.spec.expectations("extactic")[0]
        expected = s.spec.parse(expected_src)
        ratio = E.ratio_to(expected)
        check(ratio is not None and not ratio.is_zero(), f"{name}: computed {E}, expected {expected}")
        printed = s.spec.first("printed_extactic")
        if printed is not None:
            check(E.ratio_to(s.spec.parse(printed)) is None, f"{name}: printed extactic unexpectedly matches")
            check(s.spec.first("discrepancy") is not None, f"{name}: discrepancy not recorded")
            notes.append(f"{name} discrepancy flagged")
    # explicit spot checks on two printed values
    q6, q7 = load_system("quad06"), load_system("quad07")
    check(extactic(q6.field, [q6.spec.parse("x"), q6.spec.parse("y")]).E_W == q6.spec.parse("-a011*y^2*z"), "system 6")
    check(extactic(q7.field, [q7.spec.parse("x"), q7.spec.parse("y")]).E_W == q7.spec.parse("b011*x*y*z"), "system 7")
    return "18 extactic polynomials match up to a constant; " + ", ".join(notes)


def criterion_4():
    details = []
    for k2 in ("1", "I"):
        s = _instantiated("pp0", f"a=1, b=2, c=3, k2={k2}, a020=1, k001=1")
        res = find_meridians(s.field, s.ellipsoid)
        check(len(res.meridians) == 3, f"k2={k2}: {len(res.meridians)} meridians")
        nreal = sum(res.real)
        check(nreal <= 2, f"k2={k2}: {nreal} real meridians")
        for h in res.meridians:
            check(h.transversality is Transversality.VERIFIED, f"{h.f} not transversality-verified")
            check(normal_form(lie_derivative(s.field, h.f) - h.k * h.f, s.ellipsoid).is_zero(), f"{h.f}: cofactor")
        details.append(f"k2={k2}: 3 complex, {nreal} real")
    return "; ".join(details)


def criterion_5():
    s = load_system("ex2")
    res = find_parallels(s.field, s.ellipsoid)
    forms = [str(h.f) for h in res.parallels]
    check(forms == ["z"], f"parallels {forms}")
    bound = bound_parallels((1, 2, 2)).value
    check(bound == 1 and res.bound.value == 1 and len(forms) == bound, f"bound {bound}")
    return "exactly {z = 0}, bound 1 reached"


def criterion_6():
    s = load_system("pp0")
    K = [s.spec.parse(k) for _, k in PRINTED_COFACTORS]
    rels = solve_relation(K, E=s.ellipsoid)
    support = [tuple(int(not c.is_zero()) for c in r.lambdas) for r in rels]
    check((1, 1, 0) in support, f"supports {support}")
    rel = rels[support.index((1, 1, 0))]
    check(rel.is_first_integral and rel.lambdas[:2] == (1, 1), f"relation {rel}")
    hyps = [invariance_check(s.field, s.spec.parse(f), s.ellipsoid) for f, _ in PRINTED_COFACTORS]
    fn = build_darboux_function(hyps, rel, s.field, s.ellipsoid)
    H = fn.polynomial()
    check(H == s.spec.parse("b^2*x^2 + a^2*y^2"), f"first integral {H}")
    check(lie_derivative(s.field, H).is_zero(), "X(H) is not identically zero")
    return "relation (1,1,0), sigma = 0, H = b^2*x^2 + a^2*y^2 with X(H) = 0"


def criterion_7():
    for m1 in range(1, 7):
        v = bound_hyperplanes_Rn(2, (m1, m1)).value
        check(v == 3 * m1 - 1, f"m1={m1}: {v}")
    check(bound_meridians(2, (2, 2, 2)).value == 3, "meridian bound")
    q6 = load_system("quad06")
    rep = extactic(q6.field, [q6.spec.parse("x"), q6.spec.parse("y")])
    check(multiplicity(q6.spec.parse("y"), rep) == 2, "multiplicity of y")
    return "3*m1 - 1 for m1 = 1..6; meridian bound 3; multiplicity 2"


PROPERTY_SUITES = [
    "test_leibniz_rule",
    "test_divrem_round_trip",
    "test_det_matches_cofactor_expansion",
    "test_normal_form_properties",
    "test_normal_form_symbolic_axes",
    "test_invariant_planes_divide_extactic",
    "test_extactic_unimodular_basis_change",
]


def criterion_8():
    check(props.N_CASES >= 100, f"only {props.N_CASES} cases per suite")
    E = Ellipsoid(COORDS, [load_system("pp0").spec.parse(v).constant_term() for v in ("a", "b", "c")])
    for name in PROPERTY_SUITES:
        fn = getattr(props, name)
        try:
            fn(E) if name == "test_normal_form_symbolic_axes" else fn()
        except AssertionError as exc:
            raise CriterionFailure(f"{name}: {exc}") from None
    return f"{len(PROPERTY_SUITES)} suites x {props.N_CASES} instances, zero failures"


def criterion_9():
    amb = integrability_thresholds(3, 2, "ambient")
    check((amb.darboux_threshold, amb.rational_threshold) == (5, 7), f"ambient {amb}")
    # direct evaluation of the closed forms
    check(amb.darboux_threshold == comb(4, 1) + 1 and amb.rational_threshold == comb(4, 1) + 3, "ambient formula")
    ell = integrability_thresholds(2, 2, "ellipsoid")
    check((ell.darboux_threshold, ell.rational_threshold) == (10, 11), f"ellipsoid {ell}")
    exact = (2 + 2 * 2) * comb(4, 2)
    check(exact % (2 + 2) == 0 and exact // 4 + 1 == 10, "ellipsoid formula not integral")
    for t in (amb, ell):
        check(all(isinstance(v, int) for v in (t.darboux_threshold, t.rational_threshold)), "non-integer threshold")
    return "ambient (5, 7), ellipsoid (10, 11), integral"


CRITERIA = {
    1: ("on-surface certificates", criterion_1),
    2: ("cofactor regression", criterion_2),
    3: ("extactic regression", criterion_3),
    4: ("meridian counts", criterion_4),
    5: ("parallel count", criterion_5),
    6: ("Darboux synthesis", criterion_6),
    7: ("bound formulas", criterion_7),
    8: ("property suites", criterion_8),
    9: ("thresholds", criterion_9),
}


def run_criterion(number: int) -> tuple[bool, str]:
    title, fn = CRITERIA[number]
    try:
        detail = fn()
        ok = True
    except CriterionFailure as exc:
        ok, detail = False, str(exc)
    RESULTS[number] = (ok, detail)
    return ok, detail


def format_line(number: int) -> str:
    ok, detail = RESULTS[number]
    return f"criterion {number} [{CRITERIA[number][0]}]: {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.fixture(scope="module", autouse=True)
def _summary(request):
    yield
    reporter = request.config.pluginmanager.getplugin("terminalreporter")
    lines = [format_line(n) for n in sorted(RESULTS)]
    if reporter is not None:
        reporter.write_line("")
        for line in lines:
            reporter.write_line(line)
    else:
        print("\n".join(lines))


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, detail = run_criterion(number)
    print(format_line(number))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        ok, _ = run_criterion(n)
        failed += not ok
        print(format_line(n), flush=True)
    sys.exit(1 if failed else 0)
