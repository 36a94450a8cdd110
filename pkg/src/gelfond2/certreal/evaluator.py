"""Certified evaluation of integer polynomials at a target number."""

from __future__ import annotations

import functools
from fractions import Fraction

from . import _upoly
from .enclosure import DEFAULT_CAP, ComplexEnclosure, Enclosure, PrecisionError
from .targets import (
    Rational,
    XiSpec,
    certificate,
    is_complex,
    never_low_degree,
    real_part,
    refine,
)


def _coeffs(p) -> tuple:
    c = getattr(p, "coeffs", p)
    return tuple(_upoly.trim(c))


class Target:
    """A target number together with exact knowledge about it.

    ``kind`` is one of ``rational``, ``quadratic`` (real, degree 2),
    ``imag_quadratic``, ``high`` (certainly not algebraic of degree <= 2)
    or ``unknown``.  Exact zero and tie decisions use that knowledge; all
    other comparisons refine until the enclosures separate.
    """

    def __init__(self, xi: XiSpec, cap: int = DEFAULT_CAP):
        self.spec = xi
        self.xi = real_part(xi)
        self.cap = cap
        self.is_complex = is_complex(self.xi)
        self.certificate = certificate(self.xi)
        if self.certificate is not None:
            if len(self.certificate) == 2:
                self.kind = "rational"
                c0, c1 = self.certificate
                self.exact_value = Fraction(-c0, c1)
            else:
                self.kind = "imag_quadratic" if self.is_complex else "quadratic"
        elif never_low_degree(self.xi):
            self.kind = "high"
        else:
            self.kind = "unknown"
        self._cache: dict[int, object] = {}

    def __repr__(self):
        return f"Target({self.xi!r}, kind={self.kind})"

    # enclosures of xi ----------------------------------------------------

    def enclosure(self, bits: int):
        enc = self._cache.get(bits)
        if enc is None:
            enc = refine(self.xi, bits, self.cap)
            self._cache[bits] = enc
        return enc

    @functools.cached_property
    def modulus_bound(self) -> Fraction:
        """Rational upper bound on ``|xi|``."""
        e = self.enclosure(32)
        if isinstance(e, ComplexEnclosure):
            return max(abs(e.re.lo), abs(e.re.hi)) + max(abs(e.im.lo), abs(e.im.hi))
        return max(abs(e.lo), abs(e.hi))

    def floats(self) -> tuple[float, float, float, float]:
        """Double approximations of ``xi`` and ``xi**2`` as (re, im, re2, im2)."""
        e = self.enclosure(80)
        if isinstance(e, ComplexEnclosure):
            sq = e * e
            return float(e.re.mid), float(e.im.mid), float(sq.re.mid), float(sq.im.mid)
        return float(e.mid), 0.0, float((e * e).mid), 0.0

    # polynomial values ---------------------------------------------------

    def value(self, p, bits: int):
        """Enclosure of ``P(xi)`` using ``xi`` at ``bits`` bits (no width promise)."""
        c = _coeffs(p)
        if self.kind == "rational":
            return Enclosure.point(_upoly.horner(c, self.exact_value))
        x = self.enclosure(bits)
        acc = Enclosure.point(0)
        if isinstance(x, ComplexEnclosure):
            acc = ComplexEnclosure(acc, Enclosure.point(0))
        for coef in reversed(c):
            acc = acc * x + coef
        return acc

    def value_to_width(self, p, bits: int):
        """Enclosure of ``P(xi)`` of width at most ``2**-bits``."""
        c = _coeffs(p)
        target = Fraction(1, 1 << bits)
        if self.is_zero(c):
            return Enclosure.point(0)
        work = bits + max(abs(v) for v in c).bit_length() + 2 * len(c) + 4 if c else bits
        while True:
            if work > self.cap:
                raise PrecisionError(f"evaluation needs more than {self.cap} bits")
            v = self.value(c, work)
            if v.width <= target:
                return v
            work = min(work + max(32, work // 2), self.cap) if work < self.cap else work + 1

    def is_zero(self, p) -> bool | None:
        """Exact test for ``P(xi) == 0``; ``None`` if undecidable from what is known."""
        c = _coeffs(p)
        if not c:
            return True
        if self.kind == "rational":
            return _upoly.horner(c, self.exact_value) == 0
        if len(c) == 1:
            return False
        if self.kind in ("quadratic", "imag_quadratic"):
            return len(c) <= 3 and not _upoly.rem(c, self.certificate)
        if self.kind == "high":
            return False if len(c) <= 3 else None
        return None

    def _norm_sq(self, c) -> Fraction:
        # |P(xi)|^2 = P(xi) P(conj xi) via the symmetric functions of the roots
        m0, m1, m2 = self.certificate
        s, n = Fraction(-m1, m2), Fraction(m0, m2)
        a0, a1, a2 = (list(c) + [0, 0, 0])[:3]
        return (
            a0 * a0 + a1 * a1 * n + a2 * a2 * n * n
            + a0 * a1 * s + a1 * a2 * n * s + a0 * a2 * (s * s - 2 * n)
        )

    def abs_value(self, p, bits: int = 64) -> Enclosure:
        """Enclosure of ``|P(xi)|`` of width at most ``2**-bits``."""
        c = _coeffs(p)
        if self.is_zero(c):
            return Enclosure.point(0)
        if self.kind == "rational":
            return Enclosure.point(abs(_upoly.horner(c, self.exact_value)))
        if self.kind == "imag_quadratic" and len(c) <= 3:
            return Enclosure.point(self._norm_sq(c)).sqrt(bits + 1)
        v = self.value_to_width(c, bits + 2)
        if isinstance(v, ComplexEnclosure):
            return v.modulus(bits + 2)
        if v.contains_zero() and self.is_zero(c) is False:
            return self._nonzero_abs(c, bits)
        return abs(v)

    def _nonzero_abs(self, c, bits: int) -> Enclosure:
        # known nonzero: refine until the sign is resolved so the result excludes 0
        work = bits + 2
        while True:
            v = self.value_to_width(c, work)
            if not v.contains_zero():
                return abs(v)
            if work >= self.cap:
                raise PrecisionError("could not separate a nonzero value from 0")
            work = min(2 * work, self.cap)

    def abs_equal(self, p, q) -> bool | None:
        """Exact test for ``|P(xi)| == |Q(xi)|``; ``None`` when undecidable."""
        a, b = _coeffs(p), _coeffs(q)
        if self.kind == "rational":
            return abs(_upoly.horner(a, self.exact_value)) == abs(_upoly.horner(b, self.exact_value))
        if self.kind == "imag_quadratic" and len(a) <= 3 and len(b) <= 3:
            return self._norm_sq(a) == self._norm_sq(b)
        if self.is_complex:
            return True if a == b or a == tuple(-v for v in b) else None
        za, zb = self.is_zero(_upoly.sub(a, b)), self.is_zero(_upoly.add(a, b))
        if za or zb:
            return True
        if za is False and zb is False:
            return False
        return None

    def compare_abs(self, p, q, bits: int = 64) -> int:
        """Exact sign of ``|P(xi)| - |Q(xi)|``."""
        eq = self.abs_equal(p, q)
        if eq:
            return 0
        if self.kind == "rational":
            a = abs(_upoly.horner(_coeffs(p), self.exact_value))
            b = abs(_upoly.horner(_coeffs(q), self.exact_value))
            return (a > b) - (a < b)
        if self.kind == "imag_quadratic":
            a, b = self._norm_sq(_coeffs(p)), self._norm_sq(_coeffs(q))
            return (a > b) - (a < b)
        while True:
            u, v = self.abs_value(p, bits), self.abs_value(q, bits)
            if u.hi < v.lo:
                return -1
            if u.lo > v.hi:
                return 1
            if bits >= self.cap:
                raise PrecisionError("|P(xi)| and |Q(xi)| not separated at the cap")
            bits = min(2 * bits, self.cap)


def target_of(xi) -> Target:
    return xi if isinstance(xi, Target) else Target(xi)


def as_rational_target(q) -> Target:
    return Target(Rational(Fraction(q)))


__all__ = ["Target", "target_of", "as_rational_target"]
