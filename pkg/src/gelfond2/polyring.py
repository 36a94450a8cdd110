"""Exact integer polynomials of small degree.

Coefficients are stored constant term first.  The same class carries
rational or :class:`~gelfond2.certreal.QuadSurd` coefficients when an
operand of the gelfond sandwich needs them; everything that touches the
integer lattice insists on ``int`` entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .certreal import _upoly
from .certreal.enclosure import DEFAULT_CAP, Enclosure, PrecisionError
from .certreal.evaluator import target_of


@dataclass(frozen=True)
class Poly:
    coeffs: tuple

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def of(cls, *coeffs) -> "Poly":
        return cls(coeffs)

    @classmethod
    def from_text(cls, text: str) -> "Poly":
        """Parse space separated integers, constant term first (``"-2 0 1"`` is T^2 - 2)."""
        return cls(int(t) for t in text.replace("−", "-").split())

    def to_text(self, pad: int = 0) -> str:
        return " ".join(str(c) for c in self.padded(pad)) if (self.coeffs or pad) else "0"

    def padded(self, length: int) -> tuple:
        return self.coeffs + (0,) * max(0, length - len(self.coeffs))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def __call__(self, x):
        return _upoly.horner(self.coeffs, x)

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' if mono else ''}{mono}")
        return "Poly(" + " + ".join(terms).replace("+ -", "- ") + ")"

    def __add__(self, other):
        o = other if isinstance(other, Poly) else Poly((other,))
        return Poly(_upoly.add(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = other if isinstance(other, Poly) else Poly((other,))
        return Poly(_upoly.sub(self.coeffs, o.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly):
            return Poly(_upoly.mul(self.coeffs, other.coeffs))
        return Poly(c * other for c in self.coeffs)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly((1,))
        for _ in range(n):
            out = out * self
        return out


IntPoly = Poly
RatPoly = Poly

T = Poly((0, 1))


def height(p: Poly):
    """Largest absolute value of a coefficient (0 for the zero polynomial)."""
    return max((abs(c) for c in p.coeffs), default=0)


def derivative(p: Poly) -> Poly:
    return Poly(_upoly.derivative(p.coeffs))


def det_int(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _require_int(*ps: Poly) -> None:
    for p in ps:
        if not p.is_integral:
            raise TypeError("integer coefficients required")


def sylvester_matrix(p: Poly, q: Poly, m: int, n: int) -> list[list[int]]:
    """(m+n)-square Sylvester matrix, coefficients padded to nominal degrees."""
    pc = list(reversed(p.padded(m + 1)))  # leading first
    qc = list(reversed(q.padded(n + 1)))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + pc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + qc + [0] * (size - n - 1 - i))
    return rows


def resultant(p: Poly, q: Poly, m: int, n: int) -> int:
    """Resultant with respect to the nominal degrees ``m`` and ``n``."""
    _require_int(p, q)
    if p.is_zero or q.is_zero:
        raise ValueError("resultant of the zero polynomial")
    if p.degree > m or q.degree > n:
        raise ValueError("degree exceeds nominal degree")
    if not (1 <= m <= 3 and 1 <= n <= 3):
        raise ValueError("nominal degrees must lie in 1..3")
    return det_int(sylvester_matrix(p, q, m, n))


def det3(p: Poly, q: Poly, r: Poly) -> int:
    """Determinant with rows (constant, linear, quadratic coefficient) of P, Q, R."""
    for x in (p, q, r):
        if x.degree > 2:
            raise ValueError("det3 takes polynomials of degree <= 2")
    return det_int([x.padded(3) for x in (p, q, r)])


def content_primitive(p: Poly) -> tuple[int, Poly]:
    """``(content, primitive part)`` with the primitive part's top coefficient positive."""
    _require_int(p)
    if p.is_zero:
        raise ValueError("zero polynomial has no primitive part")
    g = 0
    for c in p.coeffs:
        g = math.gcd(g, c)
    prim = Poly(c // g for c in p.coeffs)
    if prim.lead < 0:
        prim = -prim
    return g, prim


def normalize(p: Poly) -> Poly:
    return content_primitive(p)[1]


def gcd_z(p: Poly, q: Poly) -> Poly:
    """Primitive gcd in Z[T] with positive leading coefficient."""
    _require_int(p, q)
    if p.is_zero or q.is_zero:
        raise ValueError("gcd of the zero polynomial")
    g = _upoly.gcd(p.coeffs, q.coeffs)
    den = 1
    for c in g:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return normalize(Poly(int(c * den) for c in g))


def divides(d: Poly, p: Poly) -> bool:
    return not _upoly.rem(p.coeffs, d.coeffs)


def exact_quotient(p: Poly, d: Poly) -> Poly:
    quot, r = _upoly.divmod_poly(p.coeffs, d.coeffs)
    if r or any(Fraction(c).denominator != 1 for c in quot):
        raise ValueError("not an exact integer quotient")
    return Poly(int(c) for c in quot)


def mod4_residue(p: Poly, length: int | None = None) -> tuple[int, ...]:
    """Coefficient residues in {0,1,2,3}, constant term first."""
    _require_int(p)
    n = length if length is not None else max(len(p.coeffs), 1)
    return tuple(c % 4 for c in p.padded(n))


def is_eisenstein_2(p: Poly) -> bool:
    """Eisenstein's criterion at the prime 2."""
    _require_int(p)
    if p.degree < 1:
        raise ValueError("need degree >= 1")
    if content_primitive(p)[0] != 1:
        raise ValueError("is_eisenstein_2 expects a primitive polynomial")
    c = p.coeffs
    return c[-1] % 2 == 1 and all(v % 2 == 0 for v in c[:-1]) and c[0] % 4 != 0


def eval_abs(p: Poly, xi, bits: int = 64) -> Enclosure:
    """Certified enclosure of ``|P(xi)|`` of width at most ``2**-bits``."""
    return target_of(xi).abs_value(p, bits)


def taylor_at(p: Poly, x):
    """Coefficients of ``P(T + x)`` (x may be an enclosure), constant first."""
    c = list(p.coeffs)
    n = len(c)
    out = []
    for k in range(n):
        # k-th Taylor coefficient: sum_j binom(j, k) c_j x^(j-k)
        acc = 0
        for j in range(n - 1, k - 1, -1):
            acc = acc * x + math.comb(j, k) * c[j]
        out.append(acc)
    return out


# real roots --------------------------------------------------------------


@dataclass(frozen=True)
class RootEnclosure:
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    @property
    def enclosure(self) -> Enclosure:
        return Enclosure(self.lo, self.hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def _root_multiplicity(p: Poly, lo: Fraction, hi: Fraction) -> int:
    mult = 1
    g = p.coeffs
    while True:
        g = _upoly.gcd(g, _upoly.derivative(g))
        if len(g) < 2:
            return mult
        seq = _upoly.sturm_sequence(g)
        inside = _upoly.count_roots(seq, lo, hi) + (1 if _upoly.horner(g, lo) == 0 else 0)
        if not inside:
            return mult
        mult += 1


def real_roots(p: Poly, bits: int = 53, cap: int = DEFAULT_CAP) -> list[RootEnclosure]:
    """Disjoint enclosures of the distinct real roots, each of width <= 2**-bits.

    Isolation uses a Sturm sequence on exact rationals; refinement bisects on
    the sign of the squarefree part.
    """
    _require_int(p)
    if p.is_zero:
        raise ValueError("real_roots of the zero polynomial")
    if bits > cap:
        raise PrecisionError(f"requested {bits} bits exceeds cap {cap}")
    if p.degree < 1:
        return []
    sqf, _ = _upoly.divmod_poly(p.coeffs, _upoly.gcd(p.coeffs, _upoly.derivative(p.coeffs)))
    seq = _upoly.sturm_sequence(sqf)
    bound = _upoly.cauchy_bound(sqf)
    brackets: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = _upoly.count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            brackets.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if _upoly.horner(sqf, mid) == 0:
            brackets.append((mid, mid))
            # shrink around the exact root so it is not counted twice
            eps = (hi - lo) / 4
            while _upoly.count_roots(seq, mid - eps, mid + eps) > 1:
                eps /= 2
            stack.append((lo, mid - eps))
            stack.append((mid + eps, hi))
        else:
            stack.append((lo, mid))
            stack.append((mid, hi))
    target = Fraction(1, 1 << bits)
    out = []
    for lo, hi in sorted(brackets):
        if lo != hi:
            if _upoly.horner(sqf, hi) == 0:
                lo = hi
            else:
                s_lo = _upoly.sign_at(sqf, lo)
                while hi - lo > target:
                    mid = (lo + hi) / 2
                    s = _upoly.sign_at(sqf, mid)
                    if s == 0:
                        lo = hi = mid
                        break
                    if s == s_lo:
                        lo = mid
                    else:
                        hi = mid
        out.append(RootEnclosure(lo, hi, _root_multiplicity(p, lo, hi)))
    return out
