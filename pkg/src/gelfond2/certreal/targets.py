"""Target numbers and their certified refinement."""

from __future__ import annotations

import functools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import _upoly
from .enclosure import DEFAULT_CAP, ComplexEnclosure, Enclosure, PrecisionError


def _primitive_normalized(coeffs) -> tuple[int, ...]:
    """Clear denominators, strip content, make the top coefficient positive."""
    coeffs = [Fraction(c) for c in _upoly.trim(coeffs)]
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


# quotient streams -----------------------------------------------------------


@dataclass(frozen=True)
class FiniteQuotients:
    terms: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(int(t) for t in self.terms))
        if any(t <= 0 for t in self.terms):
            raise ValueError("partial quotients must be positive integers")

    is_finite = True

    def take(self, n: int) -> list[int]:
        return list(self.terms[:n])


@dataclass(frozen=True)
class PeriodicQuotients:
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(int(t) for t in self.preperiod))
        object.__setattr__(self, "period", tuple(int(t) for t in self.period))
        if not self.period:
            raise ValueError("empty period")
        if any(t <= 0 for t in self.preperiod + self.period):
            raise ValueError("partial quotients must be positive integers")

    is_finite = False

    def take(self, n: int) -> list[int]:
        out = list(self.preperiod[:n])
        k = len(self.period)
        while len(out) < n:
            out.append(self.period[(len(out) - len(self.preperiod)) % k])
        return out


@dataclass(frozen=True)
class FibonacciWord:
    a: int
    b: int

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("partial quotients must be positive integers")
        if self.a == self.b:
            raise ValueError("fibonacci word needs a != b (a == b gives a quadratic irrational)")

    is_finite = False

    def take(self, n: int) -> list[int]:
        return fibonacci_quotients(self.a, self.b, n)


QuotientStream = Union[FiniteQuotients, PeriodicQuotients, FibonacciWord]


@functools.lru_cache(maxsize=64)
def _fib_word(a: int, b: int, n: int) -> tuple[int, ...]:
    prev, cur = (a,), (a, b)
    while len(cur) < n:
        prev, cur = cur, cur + prev
    return cur


def fibonacci_quotients(a: int, b: int, n: int) -> list[int]:
    """First ``n`` letters of the Fibonacci word over ``{a, b}``.

    The word is the limit of ``w1 = a``, ``w2 = ab``, ``w(k+1) = w(k) w(k-1)``.
    """
    if a <= 0 or b <= 0 or n < 1:
        raise ValueError("need positive digits and n >= 1")
    if a == b:
        raise ValueError("fibonacci word needs a != b")
    if n == 1:
        return [a]
    # round n up to a power of two so the cache sees few distinct keys
    size = 1 << (n - 1).bit_length()
    return list(_fib_word(a, b, size)[:n])


# target specs ---------------------------------------------------------------


@dataclass(frozen=True)
class Rational:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class AlgebraicReal:
    """Real root of ``coefficients`` (constant term first) isolated in ``[lo, hi]``."""

    coefficients: tuple[int, ...]
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        coeffs = tuple(int(c) for c in _upoly.trim(self.coefficients))
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        _validate_algebraic(self)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


@dataclass(frozen=True)
class ContinuedFraction:
    stream: QuotientStream
    integer_part: int = 0


@dataclass(frozen=True)
class ComplexRect:
    re: "XiSpec"
    im: "XiSpec"

    def __post_init__(self):
        if isinstance(self.re, ComplexRect) or isinstance(self.im, ComplexRect):
            raise ValueError("complex parts must be real targets")


XiSpec = Union[Rational, AlgebraicReal, ContinuedFraction, ComplexRect]


def _rational_roots_near(coeffs, root_encl: list[tuple[Fraction, Fraction]]) -> list[Fraction]:
    lead = abs(coeffs[-1])
    dens = [d for d in range(1, lead + 1) if lead % d == 0]
    found = []
    for lo, hi in root_encl:
        for d in dens:
            for num in range(math.floor(lo * d), math.ceil(hi * d) + 1):
                cand = Fraction(num, d)
                if lo <= cand <= hi and _upoly.horner(coeffs, cand) == 0:
                    found.append(cand)
    return found


def _validate_algebraic(x: AlgebraicReal) -> None:
    c = x.coefficients
    if len(c) < 2:
        raise ValueError("minimal polynomial must have degree >= 1")
    g = 0
    for v in c:
        g = math.gcd(g, v)
    if g != 1:
        raise ValueError("minimal polynomial must be primitive")
    if x.lo > x.hi:
        raise ValueError("isolating interval is empty")
    seq = _upoly.sturm_sequence(c)
    if len(seq) > 1 and _upoly.degree(seq[-1]) > 0:
        raise ValueError("minimal polynomial is not squarefree")
    n_roots = _upoly.count_roots(seq, x.lo, x.hi) + (1 if _upoly.horner(c, x.lo) == 0 else 0)
    if n_roots != 1:
        raise ValueError(f"isolating interval holds {n_roots} roots, expected 1")
    d = len(c) - 1
    if d == 1:
        return
    if d == 2:
        disc = c[1] * c[1] - 4 * c[0] * c[2]
        if disc >= 0 and math.isqrt(disc) ** 2 == disc:
            raise ValueError("quadratic minimal polynomial is reducible")
        return
    # rational root test via real-root brackets; complete for degree 3
    bound = _upoly.cauchy_bound(c)
    brackets = _isolate_brackets(seq, -bound, bound)
    if _rational_roots_near(list(c), brackets):
        raise ValueError("minimal polynomial has a rational root")


def _split_point(p, lo: Fraction, hi: Fraction) -> Fraction:
    # a root exactly at the split would be counted in (lo, m] and lost from (m, hi]
    for num, den in ((1, 2), (1, 3), (2, 3), (3, 7), (4, 7), (5, 11)):
        m = lo + (hi - lo) * num / den
        if _upoly.horner(p, m) != 0:
            return m
    raise AssertionError("unreachable: polynomial with too many roots")


def _isolate_brackets(seq, a: Fraction, b: Fraction) -> list[tuple[Fraction, Fraction]]:
    out = []
    stack = [(Fraction(a), Fraction(b))]
    p = seq[0]
    while stack:
        lo, hi = stack.pop()
        n = _upoly.count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1 or hi - lo < Fraction(1, 1 << 60):
            out.append((lo, hi))
            continue
        m = _split_point(p, lo, hi)
        stack.append((lo, m))
        stack.append((m, hi))
    return sorted(out)


# refinement -----------------------------------------------------------------


_alg_lock = threading.Lock()
_alg_brackets: dict[AlgebraicReal, tuple[int, Fraction, int]] = {}


def _refine_algebraic(x: AlgebraicReal, bits: int) -> Enclosure:
    # Bisection of [x.lo, x.hi] visits a fixed chain of dyadic cells (the root
    # is irrational, so it never lands on a midpoint).  The cache keeps the
    # deepest cell seen; shallower requests are read off it on the grid, so
    # the answer depends on ``bits`` only, never on call history.
    c = x.coefficients
    if len(c) == 2:
        return Enclosure.point(Fraction(-c[0], c[1]))
    width = x.hi - x.lo
    target = Fraction(1, 1 << (bits + 1))
    depth = 0
    while width / (1 << depth) > target:
        depth += 1
    with _alg_lock:
        state = _alg_brackets.get(x)
    if state is None:
        state = (0, x.lo, _upoly.sign_at(c, x.lo))
    k, lo, s_lo = state
    if k >= depth:
        step = width / (1 << depth)
        lo = x.lo + math.floor((lo - x.lo) / step) * step
        return Enclosure(lo, lo + step).outward(bits + 2)
    step = width / (1 << k)
    while k < depth:
        step /= 2
        k += 1
        if _upoly.sign_at(c, lo + step) == s_lo:
            lo += step
    with _alg_lock:
        prev = _alg_brackets.get(x)
        if prev is None or prev[0] < k:
            _alg_brackets[x] = (k, lo, s_lo)
    return Enclosure(lo, lo + step).outward(bits + 2)


@functools.lru_cache(maxsize=256)
def _refine_cf(x: ContinuedFraction, bits: int) -> Enclosure:
    target = Fraction(1, 1 << (bits + 1))
    p_prev, q_prev = 1, 0
    p, q = x.integer_part, 1
    n = 64
    k = 0
    while True:
        terms = x.stream.take(n)
        while k < len(terms):
            a = terms[k]
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
            k += 1
            if not x.stream.is_finite and Fraction(1, q * q_prev) <= target:
                lo, hi = sorted((Fraction(p_prev, q_prev), Fraction(p, q)))
                return Enclosure(lo, hi).outward(bits + 2)
        if x.stream.is_finite:
            return Enclosure.point(Fraction(p, q))
        n *= 2


def refine(xi: XiSpec, bits: int, cap: int = DEFAULT_CAP):
    """Enclosure of ``xi`` with width at most ``2**-bits``.

    Complex targets give a :class:`ComplexEnclosure` whose sides both meet
    the width bound.
    """
    if bits < 1:
        raise ValueError("bits must be positive")
    if bits > cap:
        raise PrecisionError(f"requested {bits} bits exceeds cap {cap}")
    if isinstance(xi, Rational):
        return Enclosure.point(xi.value)
    if isinstance(xi, AlgebraicReal):
        return _refine_algebraic(xi, bits)
    if isinstance(xi, ContinuedFraction):
        return _refine_cf(xi, bits)
    if isinstance(xi, ComplexRect):
        return ComplexEnclosure(refine(xi.re, bits, cap), refine(xi.im, bits, cap))
    raise TypeError(f"not a target spec: {xi!r}")


# degree <= 2 certificates ---------------------------------------------------


def _periodic_minpoly(x: ContinuedFraction) -> tuple[int, ...]:
    s = x.stream
    # tail y = [period..., y]:  y = (P y + P') / (Q y + Q')
    p_prev, p, q_prev, q = 1, s.period[0], 0, 1
    for a in s.period[1:]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    tail = [-p_prev, q_prev - p, q]  # q y^2 + (q' - p) y - p' = 0
    # xi = (A y + B) / (C y + D) from the integer part and the preperiod
    A, B, C, D = x.integer_part, 1, 1, 0
    for a in s.preperiod:
        A, B = a * A + B, A
        C, D = a * C + D, C
    # y = (D xi - B) / (A - C xi); substitute and clear the denominator
    num = [-B, D]
    den = [A, -C]
    poly = _upoly.add(
        _upoly.add(
            [tail[2] * v for v in _upoly.mul(num, num)],
            [tail[1] * v for v in _upoly.mul(num, den)],
        ),
        [tail[0] * v for v in _upoly.mul(den, den)],
    )
    return _primitive_normalized(poly)


def certificate(xi: XiSpec) -> tuple[int, ...] | None:
    """Primitive integer polynomial of degree <= 2 vanishing at ``xi``, if one is known."""
    if isinstance(xi, Rational):
        v = xi.value
        return _primitive_normalized([-v.numerator, v.denominator])
    if isinstance(xi, AlgebraicReal):
        return xi.coefficients if xi.degree <= 2 else None
    if isinstance(xi, ContinuedFraction):
        if isinstance(xi.stream, FiniteQuotients):
            v = refine(xi, 1)
            return certificate(Rational(v.lo))
        if isinstance(xi.stream, PeriodicQuotients):
            return _periodic_minpoly(xi)
        return None
    if isinstance(xi, ComplexRect):
        if isinstance(xi.im, Rational) and xi.im.value == 0:
            return certificate(xi.re)
        if not isinstance(xi.re, Rational):
            return None
        x = xi.re.value
        if isinstance(xi.im, Rational):
            ysq = xi.im.value ** 2
        elif isinstance(xi.im, AlgebraicReal) and xi.im.degree == 2 and xi.im.coefficients[1] == 0:
            c0, _, c2 = xi.im.coefficients
            ysq = Fraction(-c0, c2)
        else:
            return None
        return _primitive_normalized([x * x + ysq, -2 * x, 1])
    raise TypeError(f"not a target spec: {xi!r}")


def never_low_degree(xi: XiSpec) -> bool:
    """True when ``xi`` is certainly not algebraic of degree <= 2."""
    if isinstance(xi, AlgebraicReal):
        return xi.degree >= 3
    if isinstance(xi, ContinuedFraction):
        return isinstance(xi.stream, FibonacciWord)
    if isinstance(xi, ComplexRect):
        if isinstance(xi.im, Rational) and xi.im.value == 0:
            return never_low_degree(xi.re)
        return False
    return False


def is_complex(xi: XiSpec) -> bool:
    return isinstance(xi, ComplexRect) and not (isinstance(xi.im, Rational) and xi.im.value == 0)


def real_part(xi: XiSpec) -> XiSpec:
    """Collapse a complex spec with zero imaginary part to its real part."""
    if isinstance(xi, ComplexRect) and not is_complex(xi):
        return xi.re
    return xi
