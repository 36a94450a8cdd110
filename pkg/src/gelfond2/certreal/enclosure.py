"""Certified real and complex enclosures with exact rational endpoints.

Endpoints are :class:`fractions.Fraction` values.  Arithmetic between
enclosures is exact (no rounding), so the only source of widening is the
width of the inputs; :meth:`Enclosure.outward` snaps endpoints to a dyadic
grid when sizes need to be kept in check.  Transcendental operations
(log, exp, real powers) go through mpmath's interval kernels with an
explicit working precision and are converted back exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from mpmath.libmp import from_rational, round_ceiling, round_floor, to_rational
from mpmath.libmp import libmpi

DEFAULT_CAP = 4096

Number = Union[int, Fraction]


class PrecisionError(ArithmeticError):
    """Raised when a decision cannot be reached below the precision cap."""


class Ordering(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    OVERLAPPING = "overlapping"


def _floor_grid(q: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(q * (1 << bits)), 1 << bits)


def _ceil_grid(q: Fraction, bits: int) -> Fraction:
    return Fraction(math.ceil(q * (1 << bits)), 1 << bits)


@dataclass(frozen=True)
class Enclosure:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty enclosure [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, q: Number) -> "Enclosure":
        return cls(q, q)

    @classmethod
    def hull(cls, *items: "Enclosure") -> "Enclosure":
        return cls(min(e.lo for e in items), max(e.hi for e in items))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, q) -> bool:
        if isinstance(q, Enclosure):
            return self.lo <= q.lo and q.hi <= self.hi
        return self.lo <= q <= self.hi

    def intersects(self, other: "Enclosure") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def outward(self, bits: int) -> "Enclosure":
        """Round endpoints outward to multiples of ``2**-bits``."""
        return Enclosure(_floor_grid(self.lo, bits), _ceil_grid(self.hi, bits))

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"Enclosure[{float(self.lo):.17g}, {float(self.hi):.17g}]"

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Enclosure":
        if isinstance(x, Enclosure):
            return x
        if isinstance(x, (int, Fraction)):
            return Enclosure(x, x)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Enclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Enclosure(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_point:
            k = o.lo
            return Enclosure(self.lo * k, self.hi * k) if k >= 0 else Enclosure(self.hi * k, self.lo * k)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Enclosure(min(ps), max(ps))

    __rmul__ = __mul__

    def reciprocal(self) -> "Enclosure":
        if self.contains_zero():
            raise ZeroDivisionError("enclosure contains zero")
        return Enclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if n == 0:
            return Enclosure(1, 1)
        a, b = self.lo ** n, self.hi ** n
        if n % 2 == 0 and self.contains_zero():
            return Enclosure(0, max(a, b))
        return Enclosure(min(a, b), max(a, b))

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Enclosure(0, max(-self.lo, self.hi))

    def square(self) -> "Enclosure":
        return self ** 2

    def sqrt(self, bits: int) -> "Enclosure":
        """Outward enclosure of the square root on the grid ``2**-bits``."""
        if self.hi < 0:
            raise ValueError("sqrt of negative enclosure")
        lo = max(self.lo, Fraction(0))
        scale = 1 << (2 * bits)
        lo_n = math.isqrt(math.floor(lo * scale))
        hi_q = self.hi * scale
        hi_n = math.isqrt(math.ceil(hi_q))
        if hi_n * hi_n < hi_q:
            hi_n += 1
        return Enclosure(Fraction(lo_n, 1 << bits), Fraction(hi_n, 1 << bits))

    # transcendental -------------------------------------------------------

    def to_mpi(self, prec: int):
        return (
            from_rational(self.lo.numerator, self.lo.denominator, prec, round_floor),
            from_rational(self.hi.numerator, self.hi.denominator, prec, round_ceiling),
        )

    @classmethod
    def from_mpi(cls, iv) -> "Enclosure":
        a, b = iv
        (pa, qa), (pb, qb) = to_rational(a), to_rational(b)
        return cls(Fraction(int(pa), int(qa)), Fraction(int(pb), int(qb)))

    def log(self, prec: int) -> "Enclosure":
        if self.lo <= 0:
            raise ValueError("log of non-positive enclosure")
        return Enclosure.from_mpi(libmpi.mpi_log(self.to_mpi(prec), prec))

    def exp(self, prec: int) -> "Enclosure":
        return Enclosure.from_mpi(libmpi.mpi_exp(self.to_mpi(prec), prec))

    def rpow(self, exponent: "Enclosure", prec: int) -> "Enclosure":
        """``self ** exponent`` for a positive base and a real exponent."""
        if self.lo <= 0:
            raise ValueError("real power needs a positive base")
        if exponent.is_point and exponent.lo.denominator == 1 and exponent.lo >= 0:
            return self ** int(exponent.lo)
        return (exponent * self.log(prec)).exp(prec)


def compare(a: Enclosure, b: Enclosure) -> Ordering:
    if a.hi < b.lo:
        return Ordering.LESS
    if a.lo > b.hi:
        return Ordering.GREATER
    return Ordering.OVERLAPPING


def resolve(make_lhs, make_rhs, bits: int = 64, cap: int = DEFAULT_CAP) -> Ordering:
    """Compare two lazily computed quantities, doubling precision on overlap.

    ``make_lhs``/``make_rhs`` take a bit budget and return an
    :class:`Enclosure` (or an exact number).  Raises :class:`PrecisionError`
    once the budget passes ``cap`` without separation.
    """
    while True:
        lhs = Enclosure._coerce(make_lhs(bits))
        rhs = Enclosure._coerce(make_rhs(bits))
        order = compare(lhs, rhs)
        if order is not Ordering.OVERLAPPING:
            return order
        if lhs.is_point and rhs.is_point:
            raise PrecisionError("exact tie passed to resolve()")
        if bits >= cap:
            raise PrecisionError(f"no separation at {bits} bits (cap {cap})")
        bits = min(2 * bits, cap)


@dataclass(frozen=True)
class ComplexEnclosure:
    """Axis-aligned rectangle ``re x im`` holding a complex value."""

    re: Enclosure
    im: Enclosure

    @staticmethod
    def _coerce(x) -> "ComplexEnclosure":
        if isinstance(x, ComplexEnclosure):
            return x
        if isinstance(x, Enclosure):
            return ComplexEnclosure(x, Enclosure.point(0))
        if isinstance(x, (int, Fraction)):
            return ComplexEnclosure(Enclosure.point(x), Enclosure.point(0))
        return NotImplemented

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def __add__(self, other):
        o = self._coerce(other)
        return ComplexEnclosure(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexEnclosure(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        return ComplexEnclosure(self.re - o.re, self.im - o.im)

    def __mul__(self, other):
        o = self._coerce(other)
        return ComplexEnclosure(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs_squared(self) -> Enclosure:
        return self.re.square() + self.im.square()

    def modulus(self, bits: int) -> Enclosure:
        return self.abs_squared().sqrt(bits)

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def outward(self, bits: int) -> "ComplexEnclosure":
        return ComplexEnclosure(self.re.outward(bits), self.im.outward(bits))


def format_bound(q: Fraction, digits: int = 30, upward: bool = False) -> str:
    """Decimal string of ``q`` rounded down (or up) at ``digits`` significant digits."""
    if q == 0:
        return "0"
    sign = -1 if q < 0 else 1
    a = abs(q)
    e = math.floor(math.log10(a.numerator) - math.log10(a.denominator))
    # log10 can be off by one near powers of ten
    while Fraction(10) ** e > a:
        e -= 1
    while Fraction(10) ** (e + 1) <= a:
        e += 1
    shift = digits - 1 - e
    scaled = a * Fraction(10) ** shift
    away = (upward and sign > 0) or (not upward and sign < 0)
    m = math.ceil(scaled) if away else math.floor(scaled)
    s = str(m)
    exp10 = len(s) - 1 - shift
    mant = s[0] + ("." + s[1:].rstrip("0") if s[1:].rstrip("0") else "")
    out = f"{mant}e{exp10:+d}" if exp10 else mant
    return ("-" if sign < 0 else "") + out


def enclosure_to_json(e: Enclosure, digits: int = 30) -> list[str]:
    return [format_bound(e.lo, digits, upward=False), format_bound(e.hi, digits, upward=True)]


def enclosure_from_json(pair) -> Enclosure:
    return Enclosure(Fraction(pair[0]), Fraction(pair[1]))
