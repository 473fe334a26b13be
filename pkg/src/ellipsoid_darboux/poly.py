"""Sparse multivariate polynomials over :class:`CoeffValue`.

Monomials are exponent tuples aligned with the coordinate list.  The monomial
order is graded lexicographic with the *last* coordinate ranked highest, so the
ellipsoid relation has leading monomial ``x_{n+1}^2``.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .coeffs import CoeffValue

__all__ = [
    "MINUS_INFINITY",
    "CoordinateMismatchError",
    "MultiPoly",
    "UniPoly",
    "monomial_key",
    "poly_det",
]


class _MinusInfinity:
    """Degree of the zero polynomial.  Compares below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-oo"

    __str__ = __repr__

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        return self

    def __int__(self):
        raise ValueError("the zero polynomial has no integer degree")


MINUS_INFINITY = _MinusInfinity()


class CoordinateMismatchError(ValueError):
    pass


def monomial_key(exps: Sequence[int]):
    """Sort key for the graded order with the last coordinate highest."""
    return (sum(exps), tuple(reversed(exps)))


class MultiPoly:
    """Immutable sparse polynomial ``sum c_m x^m`` over named coordinates."""

    __slots__ = ("coords", "terms")

    def __init__(self, coords: Iterable[str], terms: Mapping[tuple, object] | None = None):
        self.coords = tuple(coords)
        clean = {}
        if terms:
            n = len(self.coords)
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n:
                    raise ValueError(f"monomial {m} does not match {n} coordinates")
                c = CoeffValue.of(c)
                if c:
                    clean[m] = c
        self.terms = clean

    @classmethod
    def _raw(cls, coords, terms):
        p = object.__new__(cls)
        p.coords = coords
        p.terms = terms
        return p

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, coords) -> "MultiPoly":
        return cls(coords)

    @classmethod
    def constant(cls, coords, value) -> "MultiPoly":
        coords = tuple(coords)
        return cls(coords, {(0,) * len(coords): value})

    @classmethod
    def var(cls, coords, name: str) -> "MultiPoly":
        coords = tuple(coords)
        if name not in coords:
            raise CoordinateMismatchError(f"unknown coordinate {name!r}")
        exps = [0] * len(coords)
        exps[coords.index(name)] = 1
        return cls(coords, {tuple(exps): 1})

    @classmethod
    def monomial(cls, coords, exps, coeff=1) -> "MultiPoly":
        return cls(coords, {tuple(exps): coeff})

    # basic queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(m) for m in self.terms)

    def degree_in(self, name: str):
        if not self.terms:
            return MINUS_INFINITY
        i = self._index(name)
        return max(m[i] for m in self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> CoeffValue:
        return self.terms.get((0,) * len(self.coords), CoeffValue(0))

    def coefficient(self, exps) -> CoeffValue:
        return self.terms.get(tuple(exps), CoeffValue(0))

    def sorted_monomials(self, reverse=False):
        return sorted(self.terms, key=monomial_key, reverse=reverse)

    def leading_monomial(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=monomial_key)

    def leading_coefficient(self) -> CoeffValue:
        return self.terms[self.leading_monomial()]

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._raw(self.coords, {m: c for m, c in self.terms.items() if sum(m) == d})

    def is_parameter_free(self) -> bool:
        return all(c.is_parameter_free() for c in self.terms.values())

    def free_parameters(self) -> set[str]:
        out = set()
        for c in self.terms.values():
            out |= c.free_parameters()
        return out

    def _index(self, name):
        try:
            return self.coords.index(name)
        except ValueError:
            raise CoordinateMismatchError(f"unknown coordinate {name!r}") from None

    def _check(self, other: "MultiPoly"):
        if self.coords != other.coords:
            raise CoordinateMismatchError(f"coordinates {self.coords} vs {other.coords}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.coords, other)

    # ring operations ------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MultiPoly._raw(self.coords, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.coords, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = CoeffValue.of(other)
            if not c:
                return MultiPoly.zero(self.coords)
            return MultiPoly._raw(self.coords, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                prod = c1 * c2
                s = out.get(m)
                out[m] = prod if s is None else s + prod
        return MultiPoly._raw(self.coords, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero scalar (or a constant polynomial)."""
        if isinstance(other, MultiPoly):
            if not other.is_constant() or other.is_zero():
                raise ValueError("use divrem/exquo for polynomial division")
            other = other.constant_term()
        c = CoeffValue.of(other)
        return self * (CoeffValue(1) / c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.constant(self.coords, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, CoeffValue)):
            other = MultiPoly.constant(self.coords, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if self.coords != other.coords or self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[m] for m, c in self.terms.items())

    __hash__ = None

    # calculus and substitution -------------------------------------------
    def diff(self, name: str) -> "MultiPoly":
        i = self._index(name)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return MultiPoly._raw(self.coords, out)

    def subst(self, bindings: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """Simultaneous substitution of coordinates by polynomials."""
        idx = {self._index(n): self._lift(p) for n, p in bindings.items()}
        powers: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = idx[i] ** e
            return powers[key]

        result = MultiPoly.zero(self.coords)
        for m, c in self.terms.items():
            kept = tuple(0 if i in idx else e for i, e in enumerate(m))
            term = MultiPoly._raw(self.coords, {kept: c})
            for i, e in enumerate(m):
                if i in idx and e:
                    term = term * power(i, e)
            result = result + term
        return result

    def substitute_parameters(self, bindings) -> "MultiPoly":
        out = {}
        for m, c in self.terms.items():
            v = c.substitute(bindings)
            if v:
                out[m] = v
        return MultiPoly._raw(self.coords, out)

    def map_coefficients(self, fn) -> "MultiPoly":
        return MultiPoly(self.coords, {m: fn(c) for m, c in self.terms.items()})

    def conjugate(self) -> "MultiPoly":
        return self.map_coefficients(CoeffValue.conjugate)

    def real_part(self) -> "MultiPoly":
        return self.map_coefficients(CoeffValue.real_part)

    def imag_part(self) -> "MultiPoly":
        return self.map_coefficients(CoeffValue.imag_part)

    def evaluate(self, point: Mapping[str, object]) -> CoeffValue:
        total = CoeffValue(0)
        vals = [CoeffValue.of(point[n]) for n in self.coords]
        for m, c in self.terms.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    t = t * v ** e
            total = total + t
        return total

    def with_coords(self, coords: Sequence[str]) -> "MultiPoly":
        """Re-express over a coordinate list containing all used coordinates."""
        coords = tuple(coords)
        pos = []
        for i, n in enumerate(self.coords):
            if n in coords:
                pos.append(coords.index(n))
            elif any(m[i] for m in self.terms):
                raise CoordinateMismatchError(f"coordinate {n!r} is used but not in {coords}")
            else:
                pos.append(None)
        out = {}
        for m, c in self.terms.items():
            mm = [0] * len(coords)
            for i, e in enumerate(m):
                if pos[i] is not None:
                    mm[pos[i]] = e
            out[tuple(mm)] = c
        return MultiPoly._raw(coords, out)

    def collect(self, names: Sequence[str]) -> dict[tuple, "MultiPoly"]:
        """Group terms by the exponents of ``names``; values are polynomials in
        the remaining coordinates (still over the full coordinate list)."""
        idx = [self._index(n) for n in names]
        out: dict = {}
        for m, c in self.terms.items():
            key = tuple(m[i] for i in idx)
            rest = tuple(0 if i in idx else e for i, e in enumerate(m))
            out.setdefault(key, {})[rest] = c
        return {k: MultiPoly._raw(self.coords, v) for k, v in out.items()}

    # division -------------------------------------------------------------
    def divrem(self, divisor: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        """Multivariate division: ``self = q*divisor + r`` with no term of ``r``
        divisible by the leading monomial of ``divisor``."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lm = divisor.leading_monomial()
        lc = divisor.terms[lm]
        inv = CoeffValue(1) / lc
        rest = {m: c for m, c in divisor.terms.items() if m != lm}
        p = dict(self.terms)
        q: dict = {}
        r: dict = {}
        while p:
            m = max(p, key=monomial_key)
            c = p.pop(m)
            if all(a >= b for a, b in zip(m, lm)):
                shift = tuple(a - b for a, b in zip(m, lm))
                t = c * inv
                q[shift] = t
                for m2, c2 in rest.items():
                    mm = tuple(a + b for a, b in zip(shift, m2))
                    s = p.get(mm)
                    s = -(t * c2) if s is None else s - t * c2
                    if s:
                        p[mm] = s
                    else:
                        p.pop(mm, None)
            else:
                r[m] = c
        return MultiPoly._raw(self.coords, q), MultiPoly._raw(self.coords, r)

    def divides(self, other: "MultiPoly") -> bool:
        """True when ``self`` divides ``other`` exactly."""
        return other.divrem(self)[1].is_zero()

    def exquo(self, divisor: "MultiPoly") -> "MultiPoly":
        q, r = self.divrem(divisor)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def multiplicity_of(self, factor: "MultiPoly") -> int:
        """Largest k with factor**k dividing self (self must be nonzero)."""
        if self.is_zero():
            raise ValueError("multiplicity in the zero polynomial is unbounded")
        if factor.is_constant():
            raise ValueError("factor must be non-constant")
        k, rest = 0, self
        while True:
            q, r = rest.divrem(factor)
            if r:
                return k
            k, rest = k + 1, q

    def ratio_to(self, other: "MultiPoly") -> CoeffValue | None:
        """The constant c with ``self == c*other``, or None."""
        self._check(other)
        if self.is_zero() or other.is_zero():
            return None
        if self.terms.keys() != other.terms.keys():
            return None
        m = other.leading_monomial()
        c = self.terms[m] / other.terms[m]
        return c if self == other * c else None

    def as_unipoly(self, name: str) -> "UniPoly":
        i = self._index(name)
        if any(e for m in self.terms for j, e in enumerate(m) if j != i):
            raise ValueError(f"polynomial is not univariate in {name!r}")
        deg = self.degree_in(name)
        if deg is MINUS_INFINITY:
            return UniPoly(name, [])
        coeffs = [CoeffValue(0)] * (deg + 1)
        for m, c in self.terms.items():
            coeffs[m[i]] = c
        return UniPoly(name, coeffs)

    def linear_form(self):
        """(coefficients per coordinate, constant) when degree <= 1."""
        if self.degree() > 1:
            raise ValueError("not a linear polynomial")
        n = len(self.coords)
        coeffs = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            coeffs.append(self.coefficient(e))
        return coeffs, self.constant_term()

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        from .printing import format_poly

        return format_poly(self)


class UniPoly:
    """Dense univariate polynomial, coefficients from degree 0 upward."""

    __slots__ = ("variable", "coeffs")

    def __init__(self, variable: str, coeffs: Sequence):
        cs = [CoeffValue.of(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.variable = variable
        self.coeffs = tuple(cs)

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INFINITY

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def leading_coefficient(self) -> CoeffValue:
        return self.coeffs[-1]

    def is_parameter_free(self) -> bool:
        return all(c.is_parameter_free() for c in self.coeffs)

    def __add__(self, other: "UniPoly"):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [CoeffValue(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [CoeffValue(0)] * (n - len(other.coeffs))
        return UniPoly(self.variable, [x + y for x, y in zip(a, b)])

    def __neg__(self):
        return UniPoly(self.variable, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = CoeffValue.of(other)
            return UniPoly(self.variable, [x * c for x in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UniPoly(self.variable, [])
        out = [CoeffValue(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(self.variable, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly(self.variable, [1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def divmod(self, d: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.coeffs)
        dl = len(d.coeffs)
        inv = CoeffValue(1) / d.coeffs[-1]
        q = [CoeffValue(0)] * max(len(r) - dl + 1, 0)
        for k in range(len(r) - dl, -1, -1):
            t = r[k + dl - 1] * inv
            q[k] = t
            if t:
                for j, c in enumerate(d.coeffs):
                    r[k + j] = r[k + j] - t * c
        return UniPoly(self.variable, q), UniPoly(self.variable, r[: dl - 1])

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (CoeffValue(1) / self.coeffs[-1])

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def evaluate(self, value) -> CoeffValue:
        acc = CoeffValue(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def deflate(self, root) -> "UniPoly":
        """Exact quotient by (t - root); raises if root is not a root."""
        q, r = self.divmod(UniPoly(self.variable, [-CoeffValue.of(root), 1]))
        if r:
            raise ArithmeticError("value is not a root")
        return q

    def to_multipoly(self, coords=None) -> MultiPoly:
        coords = tuple(coords) if coords else (self.variable,)
        i = coords.index(self.variable)
        out = {}
        for k, c in enumerate(self.coeffs):
            e = [0] * len(coords)
            e[i] = k
            out[tuple(e)] = c
        return MultiPoly(coords, out)

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        return str(self.to_multipoly())


def _det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def poly_det(mat: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Exact determinant: direct expansion up to 2x2, Bareiss elimination above."""
    n = len(mat)
    if n == 0 or any(len(row) != n for row in mat):
        raise ValueError("determinant needs a non-empty square matrix")
    coords = mat[0][0].coords
    for row in mat:
        for e in row:
            if e.coords != coords:
                raise CoordinateMismatchError("matrix entries use different coordinates")
    if n == 1:
        return mat[0][0]
    if n == 2:
        return _det2(mat)
    a = [list(row) for row in mat]
    sign = 1
    prev = MultiPoly.constant(coords, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.zero(coords)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num if k == 0 else num.exquo(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det
