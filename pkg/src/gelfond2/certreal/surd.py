"""Exact arithmetic in the real quadratic field Q(sqrt 5)."""

from __future__ import annotations

import functools
import math
from fractions import Fraction

from .enclosure import Enclosure


@functools.total_ordering
class QuadSurd:
    """The number ``a + b*sqrt(5)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _lift(x):
        if isinstance(x, QuadSurd):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadSurd(x, 0)
        return NotImplemented

    def __repr__(self):
        return f"QuadSurd({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if not self.a:
            return f"{self.b}*sqrt(5)"
        sign = "-" if self.b < 0 else "+"
        return f"{self.a} {sign} {abs(self.b)}*sqrt(5)"

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b))

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(5)``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with 5 b^2
        d = self.a * self.a - 5 * self.b * self.b
        return sa if d > 0 else (sb if d < 0 else 0)

    def __lt__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() <= 0

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadSurd(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadSurd(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadSurd(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 5 * self.b * self.b

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero surd")
        num = self * o.conjugate()
        return QuadSurd(num.a / n, num.b / n)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        out = QuadSurd(1)
        for _ in range(n):
            out = out * self
        return out

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def enclosure(self, bits: int = 64) -> Enclosure:
        """Dyadic enclosure of width at most ``2**-bits``."""
        if self.b == 0:
            return Enclosure.point(self.a)
        # b*sqrt(5) = sign(b)*sqrt(5 b^2)
        t = 5 * self.b * self.b
        scale = 1 << (2 * (bits + 1))
        lo = math.isqrt(math.floor(t * scale))
        hi = lo + 1
        root = Enclosure(Fraction(lo, 1 << (bits + 1)), Fraction(hi, 1 << (bits + 1)))
        if self.b < 0:
            root = -root
        return root + self.a

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(5)


GAMMA = QuadSurd(Fraction(1, 2), Fraction(1, 2))
GAMMA_SQ = GAMMA * GAMMA
