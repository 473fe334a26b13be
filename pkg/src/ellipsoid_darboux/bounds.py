"""Counting bounds and integrability thresholds (pure integer arithmetic)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .field import DegreeVector
from .poly import MINUS_INFINITY
from .surface import dim_on_surface

__all__ = [
    "BoundReport",
    "Thresholds",
    "ThresholdVerdict",
    "bound_hyperplanes_Rn",
    "bound_meridians",
    "bound_parallels",
    "integrability_thresholds",
    "check_threshold",
]


def _binom(u: int, v: int) -> int:
    """C(u, v), zero when u < v (so C(1, 2) = C(0, 2) = 0)."""
    return comb(u, v) if u >= v >= 0 else 0


@dataclass(frozen=True)
class BoundReport:
    formula_id: str
    n: int
    m: tuple
    value: int | None
    notes: tuple[str, ...] = ()

    @property
    def degenerate(self) -> bool:
        return self.value is None

    def __post_init__(self):
        if self.value is not None and self.value < 0:
            raise AssertionError(f"negative bound {self.value} for {self.formula_id}")


def _prepare(m, expected_len: int | None):
    dv = DegreeVector.of(m)
    notes = []
    if expected_len is not None and len(dv.m) != expected_len:
        raise ValueError(f"degree vector needs {expected_len} entries, got {len(dv.m)}")
    if tuple(dv.m) != dv.m_sorted:
        notes.append(f"degrees sorted to {tuple(str(d) for d in dv.m_sorted)}")
    ms = dv.positive_part()
    if len(ms) != len(dv.m):
        notes.append(f"{len(dv.m) - len(ms)} zero component(s) excluded from the sums")
    if not ms:
        raise ValueError("zero vector field: bound formulas need a positive degree")
    if any(d < 0 for d in ms):
        raise ValueError("degrees must be non-negative")
    return dv, ms, notes


def bound_hyperplanes_Rn(n: int, m, through_point: bool = False) -> BoundReport:
    """Maximum number of invariant hyperplanes of a field in R^n (finitely many
    assumed), optionally only those through a common point."""
    if n < 2:
        raise ValueError("n must be at least 2")
    dv, ms, notes = _prepare(m, n)
    m1 = ms[0]
    if through_point:
        value = _binom(n - 1, 2) * (m1 - 1) + sum(ms[: n - 1]) + 1
        fid = "hyperplanes_through_point"
    else:
        value = _binom(n, 2) * (m1 - 1) + sum(ms[:n])
        fid = "hyperplanes"
    return BoundReport(fid, n, tuple(dv.m), value, tuple(notes))


def bound_meridians(n: int, m) -> BoundReport:
    """Maximum number of invariant meridians on the n-dimensional ellipsoid."""
    if n < 2:
        raise ValueError("n must be at least 2")
    dv, ms, notes = _prepare(m, n + 1)
    value = _binom(n - 1, 2) * (ms[0] - 1) + sum(ms[: n - 1]) + 1
    return BoundReport("meridians", n, tuple(dv.m), value, tuple(notes))


def bound_parallels(m) -> BoundReport:
    """Maximum number of invariant parallels: the smallest entry of the
    non-increasingly sorted degree vector.

    The degree of the last component itself is reported in the notes; the
    parallels always number at most that as well.
    """
    dv = DegreeVector.of(m)
    last = dv.m[-1]
    notes = [f"degree of the last component: {last}"]
    low = dv.m_sorted[-1]
    if low is MINUS_INFINITY:
        notes.append("a zero component: finitely many invariant parallels is not guaranteed")
        return BoundReport("parallels", len(dv.m) - 1, tuple(dv.m), None, tuple(notes))
    return BoundReport("parallels", len(dv.m) - 1, tuple(dv.m), low, tuple(notes))


@dataclass(frozen=True)
class Thresholds:
    context: str
    n: int
    m1: int
    darboux_threshold: int
    rational_threshold: int
    notes: tuple[str, ...] = field(default_factory=tuple)
    dimension_threshold: int | None = None

    @property
    def dimension_agrees(self) -> bool | None:
        if self.dimension_threshold is None:
            return None
        return self.dimension_threshold == self.darboux_threshold


def integrability_thresholds(n: int, m1: int, context: str = "ambient") -> Thresholds:
    """Numbers of invariant objects that force a Darboux relation or a rational
    first integral, in R^n (``ambient``) or on the n-dimensional ellipsoid."""
    if n < 2 or m1 < 1:
        raise ValueError("need n >= 2 and m1 >= 1")
    if context == "ambient":
        base = comb(n + m1 - 1, m1 - 1)
        return Thresholds(context, n, m1, base + 1, base + n)
    if context != "ellipsoid":
        raise ValueError(f"unknown context {context!r}")
    exact = Fraction(n + 2 * m1, n + m1) * comb(n + m1, m1)
    if exact.denominator != 1:
        raise AssertionError(f"non-integral ellipsoid threshold {exact}")
    base = int(exact)
    dim_t = dim_on_surface(n, m1) + 1
    note = f"d(m1) + 1 = {dim_t} {'agrees' if dim_t == base + 1 else 'differs'}"
    return Thresholds(context, n, m1, base + 1, base + n, (note,), dim_t)


@dataclass(frozen=True)
class ThresholdVerdict:
    p: int
    q: int
    relation_guaranteed: bool
    rational_guaranteed: bool

    @property
    def text(self) -> str:
        if self.rational_guaranteed:
            return "rational first integral guaranteed"
        if self.relation_guaranteed:
            return "relation guaranteed"
        return "no guarantee"

    def __str__(self):
        return self.text


def check_threshold(p: int, q: int, thresholds: Thresholds) -> ThresholdVerdict:
    if p < 0 or q < 0:
        raise ValueError("counts must be non-negative")
    total = p + q
    return ThresholdVerdict(
        p,
        q,
        total >= thresholds.darboux_threshold,
        total >= thresholds.rational_threshold,
    )
