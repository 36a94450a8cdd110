"""Dense univariate helpers over the rationals (constant term first).

Small and allocation-happy on purpose: every caller works with degree <= 4.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def trim(p: Sequence) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def horner(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Sequence) -> list:
    return [k * p[k] for k in range(1, len(p))]


def sub(p: Sequence, q: Sequence) -> list:
    n = max(len(p), len(q))
    return trim([(p[k] if k < len(p) else 0) - (q[k] if k < len(q) else 0) for k in range(n)])


def add(p: Sequence, q: Sequence) -> list:
    n = max(len(p), len(q))
    return trim([(p[k] if k < len(p) else 0) + (q[k] if k < len(q) else 0) for k in range(n)])


def mul(p: Sequence, q: Sequence) -> list:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def divmod_poly(p: Sequence, q: Sequence) -> tuple[list, list]:
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in trim(p)]
    dq = len(q) - 1
    lead = Fraction(q[-1])
    quot = [Fraction(0)] * max(len(r) - dq, 1)
    while len(r) - 1 >= dq and r:
        k = len(r) - 1 - dq
        f = r[-1] / lead
        quot[k] = f
        for j in range(dq + 1):
            r[j + k] -= f * q[j]
        r = trim(r)
    return trim(quot), r


def rem(p: Sequence, q: Sequence) -> list:
    return divmod_poly(p, q)[1]


def monic(p: Sequence) -> list:
    p = trim(p)
    lead = Fraction(p[-1])
    return [Fraction(c) / lead for c in p]


def gcd(p: Sequence, q: Sequence) -> list:
    """Monic gcd over Q (empty list for gcd(0, 0))."""
    a, b = trim(p), trim(q)
    while b:
        a, b = b, rem(a, b)
    return monic(a) if a else []


def sign_at(p: Sequence, x) -> int:
    v = horner(p, x)
    return (v > 0) - (v < 0)


def sturm_sequence(p: Sequence) -> list[list]:
    seq = [trim([Fraction(c) for c in p])]
    nxt = derivative(seq[0])
    while trim(nxt):
        seq.append(trim(nxt))
        r = rem(seq[-2], seq[-1])
        nxt = [-c for c in r]
    return seq


def _variations(seq: list[list], x) -> int:
    signs = [s for s in (sign_at(q, x) for q in seq) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(seq: list[list], a, b) -> int:
    """Distinct real roots in the half-open interval (a, b]."""
    return _variations(seq, a) - _variations(seq, b)


def cauchy_bound(p: Sequence) -> Fraction:
    p = trim(p)
    lead = abs(Fraction(p[-1]))
    return 1 + max((abs(Fraction(c)) for c in p[:-1]), default=Fraction(0)) / lead
