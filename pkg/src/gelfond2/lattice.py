"""Exact LLL reduction for the tiny lattices used here (rank 3)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _gram_schmidt(b: list[list[int]]):
    n = len(b)
    bstar: list[list[Fraction]] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    norms: list[Fraction] = []
    for i in range(n):
        v = [Fraction(x) for x in b[i]]
        for j in range(i):
            if not norms[j]:
                raise ValueError("basis rows are linearly dependent")
            mu[i][j] = _dot(b[i], bstar[j]) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(_dot(v, v))
    return mu, norms


def lll(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)):
    """LLL-reduce the rows of ``basis``.

    Returns ``(reduced, transform)`` with ``reduced = transform @ basis`` and
    ``transform`` unimodular.  Rows must be linearly independent.
    """
    b = [list(map(int, r)) for r in basis]
    n = len(b)
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    mu, norms = _gram_schmidt(b)
    if any(x == 0 for x in norms):
        raise ValueError("basis rows are linearly dependent")
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                u[k] = [x - q * y for x, y in zip(u[k], u[j])]
                mu, norms = _gram_schmidt(b)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            u[k], u[k - 1] = u[k - 1], u[k]
            mu, norms = _gram_schmidt(b)
            k = max(k - 1, 1)
    return b, u


def inverse_unimodular(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact inverse of a 3x3 integer matrix with determinant +-1."""
    (a, b, c), (d, e, f), (g, h, i) = m
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if det not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det {det})")
    adj = [
        [e * i - f * h, c * h - b * i, b * f - c * e],
        [f * g - d * i, a * i - c * g, c * d - a * f],
        [d * h - e * g, b * g - a * h, a * e - b * d],
    ]
    return [[det * x for x in row] for row in adj]
