"""System files, the built-in catalog and its regression checks.

A system file is line oriented::

    [system]
    name = pp0
    title = free text
    provenance = free text
    [coordinates]
    x y z
    [parameters]
    a b c k2
    k100 = 0            # optional exact binding, applied before anything else
    [ellipsoid]
    a, b, c
    [field]
    x' = ...
    [expect]
    key = value

``#`` starts a comment.  The catalog directory can be overridden with the
``ELLIPSOID_DARBOUX_CATALOG`` environment variable.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

from .coeffs import CoeffValue
from .field import OnSurfaceCertificate, VectorField, degree_vector, on_surface_check
from .invariants import (
    extactic,
    find_meridians,
    find_parallels,
    invariance_check,
    multiplicity,
    cofactor_solve,
)
from .parser import ExpressionContext, ParseError, parse_expression
from .poly import MultiPoly
from .surface import Ellipsoid

__all__ = [
    "CATALOG_ENV",
    "SystemSpec",
    "LoadedSystem",
    "SystemFormatError",
    "SystemValidationError",
    "CheckResult",
    "EntryResult",
    "parse_system_text",
    "read_system",
    "catalog_dir",
    "catalog_names",
    "load_system",
    "parse_bindings",
    "verify_entry",
    "verify_catalog",
]

CATALOG_ENV = "ELLIPSOID_DARBOUX_CATALOG"
_SECTIONS = ("system", "coordinates", "parameters", "ellipsoid", "field", "expect")
_KEYED = re.compile(r"^([A-Za-z_]+)\s*(?:\[([^\]]*)\])?\s*=\s*(.*)$")


class SystemFormatError(ValueError):
    pass


class SystemValidationError(ValueError):
    """The field is not tangent to the declared ellipsoid."""

    def __init__(self, name: str, witness: MultiPoly):
        self.name = name
        self.witness = witness
        super().__init__(f"system {name!r} is not a field on its ellipsoid; normal form of X(M) = {witness}")


@dataclass(frozen=True)
class SystemSpec:
    name: str
    coordinates: tuple[str, ...]
    parameters: tuple[str, ...]
    bindings: tuple[tuple[str, str], ...]
    semi_axes: tuple[str, ...]
    components: tuple[str, ...]
    expect: tuple[tuple[str, str | None, str], ...] = ()
    title: str = ""
    provenance: str = ""
    source: str | None = None

    @property
    def context(self) -> ExpressionContext:
        return ExpressionContext(self.coordinates, self.parameters)

    def parse(self, src: str) -> MultiPoly:
        """Parse an expression and apply the file's parameter bindings."""
        p = parse_expression(src, self.context)
        return p.substitute_parameters(self.binding_values()) if self.bindings else p

    def binding_values(self) -> dict[str, CoeffValue]:
        out = {}
        for name, src in self.bindings:
            value = parse_expression(src, self.context)
            if not value.is_constant():
                raise SystemFormatError(f"binding {name} = {src} uses a coordinate")
            out[name] = value.constant_term()
        return out

    def expectations(self, key: str) -> list[tuple[str | None, str]]:
        return [(arg, val) for k, arg, val in self.expect if k == key]

    def first(self, key: str) -> str | None:
        vals = self.expectations(key)
        return vals[0][1] if vals else None


@dataclass(frozen=True)
class LoadedSystem:
    spec: SystemSpec
    field: VectorField
    ellipsoid: Ellipsoid | None
    certificate: OnSurfaceCertificate | None

    @property
    def name(self) -> str:
        return self.spec.name


def _split_names(line: str) -> list[str]:
    return [t for t in re.split(r"[\s,]+", line.strip()) if t]


def parse_system_text(text: str, source: str | None = None) -> SystemSpec:
    section = None
    meta: dict[str, str] = {}
    coords: list[str] = []
    params: list[str] = []
    bindings: list[tuple[str, str]] = []
    axes: list[str] = []
    comps: dict[str, str] = {}
    expect: list[tuple[str, str | None, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]") and "=" not in line:
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                raise SystemFormatError(f"line {lineno}: unknown section [{section}]")
            continue
        where = f"{source or '<text>'}:{lineno}"
        if section is None:
            raise SystemFormatError(f"{where}: content before the first section")
        if section == "system":
            key, _, val = line.partition("=")
            meta[key.strip()] = val.strip()
        elif section == "coordinates":
            coords += _split_names(line)
        elif section == "parameters":
            if "=" in line:
                key, _, val = line.partition("=")
                key = key.strip()
                if key not in params:
                    params.append(key)
                bindings.append((key, val.strip()))
            else:
                params += [p for p in _split_names(line) if p not in params]
        elif section == "ellipsoid":
            axes += [a.strip() for a in line.split(",") if a.strip()]
        elif section == "field":
            key, eq, val = line.partition("=")
            key = key.strip().rstrip("'")
            if not eq or not key:
                raise SystemFormatError(f"{where}: expected \"x' = expression\"")
            comps[key] = val.strip()
        elif section == "expect":
            m = _KEYED.match(line)
            if not m:
                raise SystemFormatError(f"{where}: expected \"key = value\" or \"key[arg] = value\"")
            expect.append((m.group(1), m.group(2), m.group(3).strip()))
    if "name" not in meta:
        raise SystemFormatError(f"{source or '<text>'}: [system] needs a name")
    missing = [c for c in coords if c not in comps]
    extra = [c for c in comps if c not in coords]
    if missing or extra:
        raise SystemFormatError(f"field components do not match coordinates (missing {missing}, extra {extra})")
    if axes and len(axes) != len(coords):
        raise SystemFormatError("need one semi-axis per coordinate")
    return SystemSpec(
        name=meta["name"],
        coordinates=tuple(coords),
        parameters=tuple(params),
        bindings=tuple(bindings),
        semi_axes=tuple(axes),
        components=tuple(comps[c] for c in coords),
        expect=tuple(expect),
        title=meta.get("title", ""),
        provenance=meta.get("provenance", ""),
        source=source,
    )


def read_system(path: str | os.PathLike) -> SystemSpec:
    path = Path(path)
    return parse_system_text(path.read_text(encoding="utf-8"), str(path))


def catalog_dir() -> Path:
    override = os.environ.get(CATALOG_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("ellipsoid_darboux") / "catalog"))


def catalog_names() -> list[str]:
    return sorted(p.stem for p in catalog_dir().glob("*.sys"))


def _resolve(path_or_name) -> SystemSpec:
    p = Path(path_or_name)
    if p.suffix == ".sys" or p.exists():
        if not p.exists():
            raise FileNotFoundError(str(p))
        return read_system(p)
    candidate = catalog_dir() / f"{path_or_name}.sys"
    if not candidate.exists():
        raise FileNotFoundError(f"no system file or catalog entry named {path_or_name!r}")
    return read_system(candidate)


def parse_bindings(text: str, context: ExpressionContext) -> dict[str, CoeffValue]:
    """``"a=1, b=2/3, k2=I"`` into exact values."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, eq, val = item.partition("=")
        name = name.strip()
        if not eq or name not in context.parameters:
            raise ParseError(f"bad binding {item!r} (expected parameter=value)")
        value = parse_expression(val.strip(), context)
        if not value.is_constant():
            raise ParseError(f"binding for {name} uses a coordinate")
        out[name] = value.constant_term()
    return out


def load_system(path_or_name, instantiate: dict | None = None, validate: bool = True) -> LoadedSystem:
    """Read, parse and (with semi-axes present) check tangency to the ellipsoid.

    ``instantiate`` maps parameter names to exact values substituted after the
    file's own bindings.
    """
    spec = path_or_name if isinstance(path_or_name, SystemSpec) else _resolve(path_or_name)
    X = VectorField([spec.parse(src) for src in spec.components], spec.coordinates)
    E = None
    if spec.semi_axes:
        axes = []
        for src in spec.semi_axes:
            p = spec.parse(src)
            if not p.is_constant():
                raise SystemFormatError(f"semi-axis {src!r} uses a coordinate")
            axes.append(p.constant_term())
        E = Ellipsoid(spec.coordinates, axes)
    if instantiate:
        X = X.substitute_parameters(instantiate)
        if E is not None:
            E = E.substitute_parameters(instantiate)
    cert = None
    if E is not None and validate:
        cert = on_surface_check(X, E)
        if not cert.on_surface:
            raise SystemValidationError(spec.name, cert.witness)
    return LoadedSystem(spec, X, E, cert)


# -- regression checks ----------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    label: str
    ok: bool
    detail: str = ""
    flagged: bool = False


@dataclass
class EntryResult:
    name: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def flags(self) -> list[CheckResult]:
        return [c for c in self.checks if c.flagged]


def _basis(spec: SystemSpec, arg: str) -> list[MultiPoly]:
    return [spec.parse(s) for s in arg.split(",")]


def _ratio_text(a: MultiPoly, b: MultiPoly) -> tuple[bool, str]:
    r = a.ratio_to(b)
    return (r is not None, f"ratio {r}" if r is not None else f"computed {a}")


def verify_entry(sys: LoadedSystem) -> EntryResult:
    """Re-derive every expectation recorded in a system file."""
    spec, X, E = sys.spec, sys.field, sys.ellipsoid
    res = EntryResult(spec.name)
    add = res.checks.append
    meridian_basis = None
    if E is not None:
        meridian_basis = [MultiPoly.var(X.coordinates, x) for x in X.coordinates[: E.dimension]]
    for key, arg, val in spec.expect:
        label = f"{key}[{arg}]" if arg is not None else key
        try:
            if key == "on_surface":
                cert = sys.certificate or on_surface_check(X, E)
                ok = cert.on_surface and cert.multiplier == spec.parse(val)
                add(CheckResult(label, ok, f"multiplier {cert.multiplier}"))
            elif key == "degree":
                want = tuple(int(v) for v in val.split(","))
                dv = degree_vector(X)
                add(CheckResult(label, dv.m_sorted == want, f"m = {dv}, sorted {dv.m_sorted}"))
            elif key == "extactic":
                rep = extactic(X, _basis(spec, arg))
                ok, detail = _ratio_text(rep.E_W, spec.parse(val))
                add(CheckResult(label, ok, detail))
            elif key == "printed_extactic":
                # a known misprint: the recomputed polynomial must differ from it
                rep = extactic(X, _basis(spec, arg))
                same, _ = _ratio_text(rep.E_W, spec.parse(val))
                add(CheckResult(label, not same, "differs from the recomputed polynomial", flagged=True))
            elif key == "cofactor":
                cof = cofactor_solve(X, spec.parse(arg), E)
                ok = cof is not None and cof.k == spec.parse(val)
                add(CheckResult(label, ok, f"k = {cof.k if cof else None}"))
            elif key == "printed_cofactor":
                f = spec.parse(arg)
                cof = cofactor_solve(X, f, E)
                printed = spec.parse(val)
                wrong = cof is not None and not (cof.k == printed)
                ratio = cof.k.ratio_to(printed) if cof is not None else None
                add(CheckResult(label, wrong, f"computed k = {cof.k if cof else None}; ratio to printed {ratio}", flagged=True))
            elif key == "invariant":
                r = invariance_check(X, spec.parse(val), E)
                add(CheckResult(label, bool(r), getattr(r, "reason", "certified")))
                if r and meridian_basis is not None and r.f.degree() == 1 and r.f.constant_term().is_zero():
                    rep = extactic(X, meridian_basis)
                    in_span = all(m[-1] == 0 for m in r.f.terms)
                    if in_span:
                        add(CheckResult(f"divides[{val}]", r.f.divides(rep.E_W), "factor of the extactic"))
            elif key == "multiplicity":
                rep = extactic(X, meridian_basis)
                k = multiplicity(spec.parse(arg), rep)
                add(CheckResult(label, k == int(val), f"multiplicity {k}"))
            elif key == "parallels":
                ps = find_parallels(X, E)
                want = [spec.parse(s) for s in val.split(",")] if val else []
                got = [p.f for p in ps.parallels]
                ok = len(got) == len(want) and all(any(g == w for g in got) for w in want)
                ok = ok and ps.bound.value is not None and len(got) <= ps.bound.value
                add(CheckResult(label, ok, f"found {[str(g) for g in got]}, bound {ps.bound.value}"))
            elif key == "meridians":
                # value: "count; real_at_most" under the bindings in arg
                binds = parse_bindings(arg, spec.context)
                inst = LoadedSystem(spec, X.substitute_parameters(binds), E.substitute_parameters(binds), None)
                ms = find_meridians(inst.field, inst.ellipsoid)
                count, real_max = (int(v) for v in val.split(";"))
                nreal = sum(ms.real)
                ok = len(ms.meridians) == count and nreal <= real_max
                ok = ok and all(m.transversality.value == "verified" for m in ms.meridians)
                add(CheckResult(label, ok, f"{len(ms.meridians)} meridians, {nreal} real"))
            elif key == "discrepancy":
                add(CheckResult(label, True, val, flagged=True))
            else:
                add(CheckResult(label, False, f"unknown expectation key {key!r}"))
        except Exception as exc:  # a failing check is reported, not raised
            add(CheckResult(label, False, f"{type(exc).__name__}: {exc}"))
    return res


def verify_catalog(names: list[str] | None = None, progress: Callable[[EntryResult], None] | None = None) -> list[EntryResult]:
    out = []
    for name in names or catalog_names():
        try:
            sys = load_system(name)
        except Exception as exc:
            r = EntryResult(name, [CheckResult("load", False, f"{type(exc).__name__}: {exc}")])
        else:
            r = verify_entry(sys)
            r.checks.insert(0, CheckResult("load", True, "on the ellipsoid" if sys.ellipsoid else "loaded"))
        out.append(r)
        if progress:
            progress(r)
    return out
