"""Exact scalars: Gaussian rationals, optionally rational functions of parameters.

A :class:`CoeffValue` wraps either a bare Gaussian rational (``QQ_I``) or an
element of the fraction field ``QQ_I(p1, ..., pk)``.  Parameters are treated
as real symbols, which fixes what :meth:`CoeffValue.conjugate` means.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import QQ_I
from sympy.polys.fields import FracField

__all__ = ["CoeffValue", "ParameterError", "param_field", "gaussian"]


class ParameterError(ValueError):
    """Raised when a parameter-free value is required but parameters remain."""


@lru_cache(maxsize=None)
def param_field(params: tuple[str, ...]) -> FracField:
    return FracField(params, QQ_I)


def gaussian(re, im=0):
    """A ``QQ_I`` element from rational-like real and imaginary parts."""
    re, im = Fraction(re), Fraction(im)
    return QQ_I(QQ_I.dom(re.numerator, re.denominator), QQ_I.dom(im.numerator, im.denominator))


def _as_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _conj_poly(p):
    return p.ring.from_dict({m: QQ_I(c.x, -c.y) for m, c in p.items()})


class CoeffValue:
    """Exact scalar ``numerator / denominator``.

    ``_K`` is ``None`` for a plain Gaussian rational, otherwise the sympy
    fraction field that ``_v`` lives in.
    """

    __slots__ = ("_v", "_K")

    def __init__(self, value=0, _field=None):
        if isinstance(value, CoeffValue):
            self._v, self._K = value._v, value._K
            return
        if _field is not None:
            self._v, self._K = value, _field
            return
        if isinstance(value, (int, Fraction)):
            value = gaussian(value)
        elif isinstance(value, complex):
            raise TypeError("floating point complex values are not exact")
        elif isinstance(value, float):
            raise TypeError("floats are not exact; pass a Fraction")
        self._v, self._K = value, None

    # construction helpers -------------------------------------------------
    @classmethod
    def parameter(cls, name: str, params: tuple[str, ...]) -> "CoeffValue":
        params = tuple(sorted(set(params) | {name}))
        K = param_field(params)
        return cls(K.gens[params.index(name)], K)

    @classmethod
    def i(cls) -> "CoeffValue":
        return cls(QQ_I(0, 1))

    @classmethod
    def of(cls, value) -> "CoeffValue":
        return value if isinstance(value, CoeffValue) else cls(value)

    # field plumbing -------------------------------------------------------
    @property
    def params(self) -> tuple[str, ...]:
        return () if self._K is None else tuple(str(s) for s in self._K.symbols)

    def _in(self, K):
        """This value as an element of field ``K`` (a superset of our params)."""
        if K is None:
            return self._v
        if self._K is None:
            return K.ground_new(self._v)
        if self._K is K:
            return self._v
        return K.new(self._v.numer.set_ring(K.ring), self._v.denom.set_ring(K.ring))

    @staticmethod
    def _common(a: "CoeffValue", b: "CoeffValue"):
        if a._K is b._K:
            return a._K
        if a._K is None:
            return b._K
        if b._K is None:
            return a._K
        return param_field(tuple(sorted(set(a.params) | set(b.params))))

    def _binop(self, other, op):
        other = CoeffValue.of(other)
        K = CoeffValue._common(self, other)
        return CoeffValue(op(self._in(K), other._in(K)), K) if K is not None else CoeffValue(op(self._v, other._v))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return CoeffValue.of(other) - self

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = CoeffValue.of(other)
        if other.is_zero():
            raise ZeroDivisionError("division by a zero coefficient")
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return CoeffValue.of(other) / self

    def __neg__(self):
        return CoeffValue(-self._v, self._K)

    def __pow__(self, k: int):
        if k < 0:
            return CoeffValue(1) / (self ** -k)
        return CoeffValue(self._v ** k, self._K)

    def is_zero(self) -> bool:
        return not self._v

    def __bool__(self):
        return bool(self._v)

    def __eq__(self, other):
        if not isinstance(other, (CoeffValue, int, Fraction)):
            return NotImplemented
        other = CoeffValue.of(other)
        p, q = self.numerator, self.denominator
        r, s = other.numerator, other.denominator
        # cross-multiplication over a common polynomial ring
        K = CoeffValue._common(self, other)
        if K is None:
            return p * s == r * q
        conv = lambda x: x.set_ring(K.ring) if hasattr(x, "set_ring") else K.ring.ground_new(x)
        return conv(p) * conv(s) - conv(r) * conv(q) == 0

    __hash__ = None

    # structure ------------------------------------------------------------
    @property
    def numerator(self):
        return self._v if self._K is None else self._v.numer

    @property
    def denominator(self):
        return QQ_I(1, 0) if self._K is None else self._v.denom

    def is_parameter_free(self) -> bool:
        return self._K is None or (self._v.numer.is_ground and self._v.denom.is_ground)

    def to_gaussian(self):
        """The ``QQ_I`` value; raises :class:`ParameterError` if parameters remain."""
        if self._K is None:
            return self._v
        if not self.is_parameter_free():
            raise ParameterError(f"coefficient {self} depends on parameters")
        zero = (0,) * len(self._K.gens)
        num = self._v.numer.get(zero, QQ_I(0, 0))
        return num / self._v.denom[zero]

    def parts(self) -> tuple[Fraction, Fraction]:
        """(re, im) of a parameter-free value."""
        g = self.to_gaussian()
        return _as_fraction(g.x), _as_fraction(g.y)

    def conjugate(self) -> "CoeffValue":
        if self._K is None:
            return CoeffValue(QQ_I(self._v.x, -self._v.y))
        return CoeffValue(self._K.new(_conj_poly(self._v.numer), _conj_poly(self._v.denom)), self._K)

    def real_part(self) -> "CoeffValue":
        return (self + self.conjugate()) / 2

    def imag_part(self) -> "CoeffValue":
        return (self - self.conjugate()) / (2 * CoeffValue.i())

    def is_real(self) -> bool:
        return self == self.conjugate()

    def substitute(self, bindings: dict[str, "CoeffValue"]) -> "CoeffValue":
        """Replace parameters by other coefficient values (exact)."""
        if self._K is None or not bindings:
            return self
        names = self.params
        used = {n: CoeffValue.of(v) for n, v in bindings.items() if n in names}
        if not used:
            return self
        num = self._eval_poly(self._v.numer, names, used)
        den = self._eval_poly(self._v.denom, names, used)
        if den.is_zero():
            raise ZeroDivisionError("parameter binding makes a denominator vanish")
        return num / den

    @staticmethod
    def _eval_poly(p, names, used):
        K = param_field(names)
        one = QQ_I(1, 0)
        total = CoeffValue(0)
        for monom, c in p.items():
            term = CoeffValue(c)
            rest = [0] * len(names)
            for idx, e in enumerate(monom):
                if not e:
                    continue
                if names[idx] in used:
                    term = term * used[names[idx]] ** e
                else:
                    rest[idx] = e
            if any(rest):
                term = term * CoeffValue(K(K.ring.from_dict({tuple(rest): one})), K)
            total = total + term
        return total

    def free_parameters(self) -> set[str]:
        if self._K is None:
            return set()
        names = self.params
        used = set()
        for poly in (self._v.numer, self._v.denom):
            for monom in poly.keys():
                used.update(names[i] for i, e in enumerate(monom) if e)
        return used

    # printing -------------------------------------------------------------
    def __repr__(self):
        return f"CoeffValue({self})"

    def __str__(self):
        from .printing import format_coeff

        return format_coeff(self)
