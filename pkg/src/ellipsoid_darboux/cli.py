"""Command-line front end.

Every command prints readable text, or a single JSON document with ``--json``.
Exit codes: 0 success, 2 parse or validation error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .bounds import (
    bound_hyperplanes_Rn,
    bound_meridians,
    bound_parallels,
    check_threshold,
    integrability_thresholds,
)
from .catalog import (
    SystemFormatError,
    SystemValidationError,
    catalog_names,
    load_system,
    parse_bindings,
    verify_catalog,
    _resolve,
)
from .darboux import build_darboux_function, solve_relation
from .field import on_surface_check
from .invariants import (
    DependentBasisError,
    NotOnSurfaceError,
    exp_factor_check,
    extactic,
    find_meridians,
    find_parallels,
    invariance_check,
    multiplicity,
)
from .parser import ParseError
from .poly import MINUS_INFINITY, MultiPoly

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILED = 3

# options whose values are expressions and may start with "-"
_EXPR_OPTIONS = {"--f", "--planes", "--basis", "--candidates", "--exp", "--instantiate", "--m"}


class CommandError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _normalize_argv(argv: Sequence[str]) -> list[str]:
    out = []
    it = iter(range(len(argv)))
    skip = False
    for i in it:
        if skip:
            skip = False
            continue
        tok = argv[i]
        if tok in _EXPR_OPTIONS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            skip = True
        else:
            out.append(tok)
    return out


def _split(text: str | None) -> list[str]:
    return [s.strip() for s in (text or "").split(",") if s.strip()]


def _deg(d) -> int | str:
    return str(d) if d is MINUS_INFINITY else d


# -- commands ------------------------------------------------------------------


def _load(args):
    spec = _resolve(args.system)
    binds = parse_bindings(args.instantiate, spec.context) if getattr(args, "instantiate", None) else None
    return load_system(spec, instantiate=binds, validate=not getattr(args, "no_validate", False))


def _loaded_for_check(args):
    spec = _resolve(args.system)
    binds = parse_bindings(args.instantiate, spec.context) if args.instantiate else None
    return load_system(spec, instantiate=binds, validate=False)


def cmd_check_surface(args):
    sysm = _loaded_for_check(args)
    if sysm.ellipsoid is None:
        raise CommandError("system declares no ellipsoid")
    cert = on_surface_check(sysm.field, sysm.ellipsoid)
    doc = {
        "system": sysm.name,
        "on_surface": cert.on_surface,
        "multiplier": str(cert.multiplier) if cert.on_surface else None,
        "witness": None if cert.on_surface else str(cert.witness),
        "assumptions": sysm.ellipsoid.assumptions,
    }
    lines = [f"system {sysm.name}"]
    if cert.on_surface:
        lines.append(f"on the ellipsoid: X(M) = ({cert.multiplier}) * M")
    else:
        lines.append(f"NOT on the ellipsoid: normal form of X(M) = {cert.witness}")
    return doc, lines, EXIT_OK if cert.on_surface else EXIT_FAILED


def _surface(args, sysm):
    return None if args.ambient else sysm.ellipsoid


def cmd_cofactor(args):
    sysm = _load(args)
    f = sysm.spec.parse(args.f)
    E = _surface(args, sysm)
    r = invariance_check(sysm.field, f, E, args.degree_bound)
    doc = {"system": sysm.name, "f": str(f), "context": "ambient" if E is None else "on-surface"}
    if not r:
        doc.update(invariant=False, reason=r.reason)
        return doc, [f"{f}: not invariant ({r.reason})"], EXIT_FAILED
    doc.update(
        invariant=True,
        cofactor=str(r.k),
        degree_bound=r.cofactor.degree_bound,
        transversality=r.transversality.value,
    )
    lines = [f"X({f}) = ({r.k}) * ({f})" + ("" if E is None else " on the ellipsoid"), f"transversality: {r.transversality.value}"]
    return doc, lines, EXIT_OK


def _report_doc(rep):
    return {
        "basis": [str(v) for v in rep.basis],
        "extactic": str(rep.E_W),
        "degenerate": rep.degenerate,
        "factors": [{"factor": str(f), "multiplicity": k} for f, k in rep.factors_found],
        "residual": str(rep.residual),
        "normal_form": None if rep.reduced is None else str(rep.reduced),
    }


def cmd_extactic(args):
    sysm = _load(args)
    basis = [sysm.spec.parse(s) for s in _split(args.basis)]
    cands = [sysm.spec.parse(s) for s in _split(args.candidates)]
    try:
        rep = extactic(sysm.field, basis, sysm.ellipsoid, cands)
    except DependentBasisError as exc:
        raise CommandError(str(exc)) from None
    doc = {"system": sysm.name, **_report_doc(rep)}
    lines = [f"E = {rep.E_W}"]
    lines += [f"  factor {f} with multiplicity {k}" for f, k in rep.factors_found]
    if rep.reduced is not None:
        lines.append(f"normal form on the ellipsoid: {rep.reduced}")
    if rep.degenerate:
        lines.append("degenerate: the extactic polynomial vanishes identically")
    return doc, lines, EXIT_OK


def _hyp_doc(h, real):
    return {
        "form": str(h.f),
        "cofactor": str(h.k),
        "transversality": h.transversality.value,
        "real": real,
    }


def cmd_meridians(args):
    sysm = _load(args)
    cands = [sysm.spec.parse(s) for s in _split(args.candidates)]
    res = find_meridians(sysm.field, sysm.ellipsoid, cands, args.degree_bound)
    doc = {
        "system": sysm.name,
        "extactic": str(res.report.E_W),
        "degenerate": res.degenerate,
        "meridians": [_hyp_doc(h, r) for h, r in zip(res.meridians, res.real)],
        "count": len(res.meridians),
        "real_count": sum(res.real),
        "bound": res.bound.value,
        "pencil": None if res.pencil is None else str(res.pencil),
        "notes": list(res.notes),
    }
    lines = [f"extactic E = {res.report.E_W}"]
    lines += [f"  {h.f} = 0   ({'real' if r else 'complex'}; cofactor {h.k})" for h, r in zip(res.meridians, res.real)]
    lines.append(f"{len(res.meridians)} meridian(s), {sum(res.real)} real; bound {res.bound.value}")
    lines += [f"note: {n}" for n in res.notes]
    return doc, lines, EXIT_OK


def cmd_parallels(args):
    sysm = _load(args)
    cands = [sysm.spec.parse(s) for s in _split(args.candidates)]
    res = find_parallels(sysm.field, sysm.ellipsoid, cands, args.degree_bound)
    doc = {
        "system": sysm.name,
        "extactic": str(res.report.E_W),
        "degenerate": res.degenerate,
        "parallels": [_hyp_doc(h, r) for h, r in zip(res.parallels, res.real)],
        "count": len(res.parallels),
        "bound": res.bound.value,
        "notes": list(res.notes),
    }
    lines = [f"extactic E = {res.report.E_W}"]
    lines += [f"  {h.f} = 0   (cofactor {h.k})" for h in res.parallels]
    lines.append(f"{len(res.parallels)} parallel(s); bound {res.bound.value}")
    lines += [f"note: {n}" for n in res.notes]
    return doc, lines, EXIT_OK


def cmd_multiplicity(args):
    sysm = _load(args)
    f = sysm.spec.parse(args.f)
    coords = sysm.field.coordinates
    if args.basis:
        basis = [sysm.spec.parse(s) for s in _split(args.basis)]
    else:
        n = len(coords) - 1 if sysm.ellipsoid is not None else len(coords)
        basis = [MultiPoly.var(coords, x) for x in coords[:n]]
    rep = extactic(sysm.field, basis)
    try:
        k = multiplicity(f, rep)
    except ValueError as exc:
        return {"system": sysm.name, "f": str(f), "error": str(exc)}, [str(exc)], EXIT_FAILED
    return {"system": sysm.name, "f": str(f), "multiplicity": k, "extactic": str(rep.E_W)}, [f"multiplicity of {f}: {k}"], EXIT_OK


def cmd_darboux(args):
    sysm = _load(args)
    E = _surface(args, sysm)
    objs = []
    for src in _split(args.planes):
        r = invariance_check(sysm.field, sysm.spec.parse(src), E, args.degree_bound)
        if not r:
            raise CommandError(f"{src} is not invariant: {r.reason}", EXIT_FAILED)
        objs.append(r)
    for src in args.exp or []:
        g_src, _, h_src = src.partition(";")
        h = sysm.spec.parse(h_src) if h_src.strip() else MultiPoly.constant(sysm.field.coordinates, 1)
        r = exp_factor_check(sysm.field, sysm.spec.parse(g_src), h, E, args.degree_bound)
        if not r:
            raise CommandError(f"exp(({g_src})/({h_src or 1})) is not an exponential factor", EXIT_FAILED)
        objs.append(r)
    hyps = [o for o in objs if hasattr(o, "cofactor")]
    exps = [o for o in objs if not hasattr(o, "cofactor")]
    rels = solve_relation([h.k for h in hyps], [e.L for e in exps], E, allow_sigma=args.sigma)
    doc = {"system": sysm.name, "cofactors": [str(h.k) for h in hyps] + [str(e.L) for e in exps], "relations": []}
    lines = [f"cofactor of {h.f}: {h.k}" for h in hyps] + [f"cofactor of exp(({e.g})/({e.h})): {e.L}" for e in exps]
    if not rels:
        lines.append("no Darboux relation")
        return doc, lines, EXIT_FAILED
    for rel in rels:
        fn = build_darboux_function(hyps + exps, rel, sysm.field, E)
        poly = fn.polynomial()
        entry = {
            "lambdas": [str(c) for c in rel.lambdas],
            "mus": [str(c) for c in rel.mus],
            "sigma": str(rel.sigma),
            "kind": "first integral" if rel.is_first_integral else "invariant",
            "function": fn.render(),
            "polynomial": None if poly is None else str(poly),
            "realified": [rf.render() for rf in fn.realified],
            "flags": list(fn.flags),
        }
        doc["relations"].append(entry)
        lines.append(f"relation lambdas=({', '.join(entry['lambdas'])}) mus=({', '.join(entry['mus'])}) sigma={entry['sigma']}")
        lines.append(f"  {entry['kind']}: {fn.render()}")
        if poly is not None:
            lines.append(f"  expanded: {poly}")
        lines += [f"  real form: {r}" for r in entry["realified"]]
    return doc, lines, EXIT_OK


def _parse_m(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in _split(text))
    except ValueError:
        raise CommandError(f"bad degree vector {text!r}") from None


def cmd_bounds(args):
    m = _parse_m(args.m)
    if args.meridians:
        rep = bound_meridians(args.n, m)
    elif args.parallels:
        rep = bound_parallels(m)
    else:
        rep = bound_hyperplanes_Rn(args.n, m, args.through_point)
    doc = {"formula": rep.formula_id, "n": rep.n, "m": [_deg(d) for d in rep.m], "value": rep.value, "notes": list(rep.notes)}
    lines = [str(rep.value) if rep.value is not None else "degenerate"] + [f"note: {n}" for n in rep.notes]
    return doc, lines, EXIT_OK


def cmd_thresholds(args):
    th = integrability_thresholds(args.n, args.m1, args.context)
    doc = {
        "context": th.context,
        "n": th.n,
        "m1": th.m1,
        "darboux_threshold": th.darboux_threshold,
        "rational_threshold": th.rational_threshold,
        "notes": list(th.notes),
    }
    lines = [f"relation threshold: {th.darboux_threshold}", f"rational first integral threshold: {th.rational_threshold}"]
    lines += [f"note: {n}" for n in th.notes]
    if args.p is not None:
        v = check_threshold(args.p, args.q or 0, th)
        doc["verdict"] = v.text
        lines.append(f"p={v.p}, q={v.q}: {v.text}")
    return doc, lines, EXIT_OK


def cmd_catalog(args):
    entries = []
    lines = []
    for name in catalog_names():
        spec = _resolve(name)
        entries.append({"name": spec.name, "title": spec.title, "provenance": spec.provenance})
        lines.append(f"{spec.name:8s} {spec.title}")
    return {"entries": entries}, lines, EXIT_OK


def cmd_verify_catalog(args):
    results = verify_catalog(_split(args.names) or None)
    doc = {"entries": [], "passed": all(r.passed for r in results)}
    lines = []
    for r in results:
        doc["entries"].append(
            {
                "name": r.name,
                "passed": r.passed,
                "checks": [{"label": c.label, "ok": c.ok, "detail": c.detail, "flagged": c.flagged} for c in r.checks],
            }
        )
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.name} ({len(r.checks)} checks)")
        for c in r.checks:
            if not c.ok:
                lines.append(f"    failed {c.label}: {c.detail}")
            elif c.flagged:
                lines.append(f"    flagged {c.label}: {c.detail}")
    npass = sum(r.passed for r in results)
    lines.append(f"{npass}/{len(results)} entries pass")
    return doc, lines, EXIT_OK if doc["passed"] else EXIT_FAILED


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ellipsoid-darboux", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="print one JSON document")
    sub = p.add_subparsers(dest="command", required=True)

    def system_cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("system", help="catalog name or path to a .sys file")
        sp.add_argument("--instantiate", help="exact parameter values, e.g. a=1,b=2,k2=I")
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.set_defaults(func=fn)
        return sp

    system_cmd("check-surface", cmd_check_surface, "certify that the field is tangent to its ellipsoid")
    for name, fn, help_ in (
        ("cofactor", cmd_cofactor, "solve for the cofactor of a polynomial"),
        ("darboux", cmd_darboux, "find Darboux relations among invariant planes / exponential factors"),
    ):
        sp = system_cmd(name, fn, help_)
        sp.add_argument("--ambient", action="store_true", help="work in the ambient space, not on the ellipsoid")
        sp.add_argument("--degree-bound", type=int, help="cofactor degree bound (default m1 - 1)")
        if name == "cofactor":
            sp.add_argument("--f", required=True, help="the polynomial")
        else:
            sp.add_argument("--planes", default="", help="comma separated invariant polynomials")
            sp.add_argument("--exp", action="append", help="exponential factor 'g;h' for exp(g/h); repeatable")
            sp.add_argument("--sigma", action="store_true", help="also allow a time-dependent invariant")
    sp = system_cmd("extactic", cmd_extactic, "extactic polynomial of a basis")
    sp.add_argument("--basis", required=True, help="comma separated basis polynomials")
    sp.add_argument("--candidates", help="comma separated factors to test")
    for name, fn in (("meridians", cmd_meridians), ("parallels", cmd_parallels)):
        sp = system_cmd(name, fn, f"find invariant {name}")
        sp.add_argument("--candidates", help="comma separated forms to verify")
        sp.add_argument("--degree-bound", type=int)
    sp = system_cmd("multiplicity", cmd_multiplicity, "multiplicity of a factor of the extactic polynomial")
    sp.add_argument("--f", required=True)
    sp.add_argument("--basis", help="basis (default: the meridian basis)")

    sp = sub.add_parser("bounds", help="counting bounds")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", required=True, help="degree vector, e.g. 2,2,2")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--meridians", action="store_true")
    g.add_argument("--parallels", action="store_true")
    g.add_argument("--hyperplanes", action="store_true")
    sp.add_argument("--through-point", action="store_true")
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("thresholds", help="integrability thresholds")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m1", type=int, required=True)
    sp.add_argument("--context", choices=("ambient", "ellipsoid"), default="ambient")
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_thresholds)

    sp = sub.add_parser("catalog", help="list the built-in systems")
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("verify-catalog", help="re-derive every catalog expectation")
    sp.add_argument("--names", help="comma separated subset")
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify_catalog)
    return p


def run_command(argv: Sequence[str]) -> tuple[dict, list[str], int]:
    """Parse ``argv`` and run it; returns (structured document, text lines, exit code)."""
    args = build_parser().parse_args(_normalize_argv(list(argv)))
    try:
        return args.func(args)
    except CommandError as exc:
        return {"error": str(exc)}, [f"error: {exc}"], exc.code
    except (ParseError, SystemFormatError, SystemValidationError, NotOnSurfaceError, FileNotFoundError) as exc:
        return {"error": str(exc)}, [f"error: {exc}"], EXIT_INVALID
    except ValueError as exc:
        return {"error": str(exc)}, [f"error: {exc}"], EXIT_INVALID


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args_json = "--json" in argv
        doc, lines, code = run_command(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_INVALID if exc.code else EXIT_OK
    if args_json:
        doc = {"exit_code": code, **doc}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
