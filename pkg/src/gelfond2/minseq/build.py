"""Construction of the minimal-polynomial sequence.

For each height X let p_X be the least ``|P(xi)|`` over nonzero integer
polynomials of degree <= 2 and height <= X.  The sequence records the
heights where p_X strictly drops (height 1 always opens the sequence) and
a polynomial realising the new minimum.
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .. import kernels
from ..certreal.enclosure import Enclosure, PrecisionError
from ..certreal.evaluator import Target, target_of
from ..lattice import lll
from ..polyring import Poly, content_primitive
from .records import MinimalRecord

EXHAUSTIVE_DEFAULT_CAP = 500


def _lex_key(c: tuple[int, int, int]):
    # tie-break: smallest (c2, c1, c0)
    return (c[2], c[1], c[0])


def _normalized(c: Sequence[int]) -> tuple[int, int, int]:
    a0, a1, a2 = (int(v) for v in c)
    if a2 < 0 or (a2 == 0 and (a1 < 0 or (a1 == 0 and a0 < 0))):
        a0, a1, a2 = -a0, -a1, -a2
    return a0, a1, a2


def record_value(target: Target, p, bits: int = 64) -> Enclosure:
    """``|P(xi)|`` with at least ~50 significant bits when nonzero."""
    v = target.abs_value(p, bits)
    if v.is_point or v.lo == 0:
        return v
    rel = bits + max(0, -math.floor(math.log2(v.lo)))
    return target.abs_value(p, rel) if rel > bits else v


class _Best:
    """Running minimum with exact comparisons."""

    def __init__(self, target: Target):
        self.target = target
        self.coeffs: tuple[int, int, int] | None = None
        self.value: Enclosure | None = None
        self.float_hi = math.inf

    def pick(self, cands: Iterable[tuple[int, int, int]]) -> tuple[int, int, int]:
        t = self.target

        def cmp(p, q):
            return t.compare_abs(p, q) or ((_lex_key(p) > _lex_key(q)) - (_lex_key(p) < _lex_key(q)))

        return min(cands, key=functools.cmp_to_key(cmp))

    def offer(self, c: tuple[int, int, int]) -> bool:
        if self.coeffs is not None and self.target.compare_abs(c, self.coeffs) >= 0:
            return False
        self.coeffs = c
        self.value = record_value(self.target, c)
        self.float_hi = math.nextafter(float(self.value.hi), math.inf) * (1 + 2.0 ** -50)
        return True


def _make_record(best: _Best, i: int, X: int, certified: bool) -> MinimalRecord:
    p = Poly(best.coeffs)
    exact_zero = bool(best.target.is_zero(p))
    if not exact_zero:
        g, prim = content_primitive(p)
        if g != 1:
            raise AssertionError(f"non-primitive record polynomial {p}")
    else:
        prim = content_primitive(p)[1]
    return MinimalRecord(i=i, X=X, P=prim, value=best.value, exact_zero=exact_zero, certified=certified)


def _slices(X: int, workers: int) -> list[tuple[int, int]]:
    n = max(1, min(workers, X + 1))
    edges = [round(k * (X + 1) / n) for k in range(n + 1)]
    return [(edges[k], edges[k + 1] - 1) for k in range(n) if edges[k + 1] > edges[k]]


def _scan_shell(floats, X: int, tol: float, pool, workers: int):
    xr, xim, x2r, x2im = floats
    if pool is None:
        m, cands = kernels.shell_scan(xr, xim, x2r, x2im, X, 0, X, tol)
        return float(m), cands
    parts = list(
        pool.map(lambda s: kernels.shell_scan(xr, xim, x2r, x2im, X, s[0], s[1], tol), _slices(X, workers))
    )
    m = min(float(p[0]) for p in parts)
    return m, np.concatenate([p[1] for p in parts])


def build_exhaustive(xi, X_max: int, workers: int = 1) -> list[MinimalRecord]:
    """Certified sequence by scanning every height shell up to ``X_max``."""
    if X_max < 1:
        raise ValueError("X_max must be >= 1")
    target = target_of(xi)
    floats = target.floats()
    modulus = float(target.modulus_bound)
    best = _Best(target)
    records: list[MinimalRecord] = []
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for X in range(1, X_max + 1):
            err = kernels.float_error_bound(X, modulus)
            m, cands = _scan_shell(floats, X, 2 * err, pool, workers)
            if m - err > best.float_hi or len(cands) == 0:
                continue
            cand = best.pick(_normalized(c) for c in cands.tolist())
            if best.offer(cand):
                records.append(_make_record(best, len(records) + 1, X, certified=True))
                if records[-1].exact_zero:
                    break
    finally:
        if pool is not None:
            pool.shutdown()
    return records


# lattice backend -------------------------------------------------------------


def _weights(X_max: int, per_octave: int) -> list[Fraction]:
    top = math.log2(16.0 * float(X_max) ** 3)
    n = int(math.ceil(top * per_octave))
    return [Fraction(2.0 ** (j / per_octave)) for j in range(n + 1)]


def _lattice_candidates(target: Target, W: Fraction, X_max: int, radius: int) -> set[tuple[int, int, int]]:
    scale = 1 << 20
    enc = target.enclosure(192)
    if target.is_complex:
        z0 = (Fraction(1), Fraction(0))
        z1 = (enc.re.mid, enc.im.mid)
        z2 = (z1[0] * z1[0] - z1[1] * z1[1], 2 * z1[0] * z1[1])
        cols = [z0, z1, z2]
        rows = [
            [scale * int(k == j) for j in range(3)]
            + [round(W * scale * cols[k][0]), round(W * scale * cols[k][1])]
            for k in range(3)
        ]
    else:
        x = enc.mid
        powers = [Fraction(1), x, x * x]
        rows = [[scale * int(k == j) for j in range(3)] + [round(W * scale * powers[k])] for k in range(3)]
    reduced, _ = lll(rows)
    basis = [[v // scale for v in r[:3]] for r in reduced]
    out: set[tuple[int, int, int]] = set()
    rng = range(-radius, radius + 1)
    for k0 in rng:
        for k1 in rng:
            for k2 in rng:
                c = [k0 * basis[0][j] + k1 * basis[1][j] + k2 * basis[2][j] for j in range(3)]
                h = max(abs(v) for v in c)
                if h == 0 or h > X_max:
                    continue
                g = math.gcd(math.gcd(c[0], c[1]), c[2])
                out.add(_normalized([v // g for v in c]))
    return out


def build_lattice(
    xi, X_max: int, workers: int = 1, per_octave: int = 4, radius: int = 2
) -> list[MinimalRecord]:
    """Heuristic sequence from LLL-reduced weighted lattices.

    Every record value is a certified enclosure of an actual polynomial of
    the stated height, so values are upper bounds for the true minima; the
    minimality itself is not certified (``certified=False``).
    """
    if X_max < 1:
        raise ValueError("X_max must be >= 1")
    target = target_of(xi)
    weights = _weights(X_max, per_octave)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda W: _lattice_candidates(target, W, X_max, radius), weights))
    else:
        parts = [_lattice_candidates(target, W, X_max, radius) for W in weights]
    pool_set: set[tuple[int, int, int]] = set().union(*parts)
    return records_from_pool(target, pool_set, certified=False)


def records_from_pool(target: Target, polys: Iterable[tuple[int, int, int]], certified: bool):
    """Running-minimum records over an explicit finite pool of polynomials."""
    arr = np.array(sorted(set(polys), key=lambda c: (max(map(abs, c)), _lex_key(c))), dtype=np.int64)
    if arr.size == 0:
        return []
    xr, xim, x2r, x2im = target.floats()
    modulus = float(target.modulus_bound)
    fl = np.hypot(arr[:, 0] + arr[:, 1] * xr + arr[:, 2] * x2r, arr[:, 1] * xim + arr[:, 2] * x2im)
    heights = np.abs(arr).max(axis=1)
    best = _Best(target)
    records: list[MinimalRecord] = []
    starts = np.flatnonzero(np.r_[True, heights[1:] != heights[:-1]])
    ends = np.r_[starts[1:], len(arr)]
    for s, e in zip(starts, ends):
        X = int(heights[s])
        err = kernels.float_error_bound(X, modulus)
        m = float(fl[s:e].min())
        if m - err > best.float_hi:
            continue
        near = [tuple(int(v) for v in arr[j]) for j in range(s, e) if fl[j] <= m + 2 * err]
        cand = best.pick(near)
        if best.offer(cand):
            records.append(_make_record(best, len(records) + 1, X, certified=certified))
            if records[-1].exact_zero:
                break
    return records


def build(xi, X_max: int, backend: str = "exhaustive", workers: int = 1) -> list[MinimalRecord]:
    """Minimal-polynomial records up to height ``X_max``.

    Stops early at an exact zero (the target is then algebraic of degree
    <= 2 and the last record carries its minimal polynomial).
    """
    if backend == "exhaustive":
        return build_exhaustive(xi, X_max, workers)
    if backend == "lattice":
        return build_lattice(xi, X_max, workers)
    raise ValueError(f"unknown backend {backend!r}")


def best_at_height(xi, X: int) -> tuple[Poly, Enclosure]:
    """Exhaustive minimiser of ``|P(xi)|`` over height <= X (tie-break: smallest (c2, c1, c0))."""
    recs = build_exhaustive(xi, X)
    last = recs[-1]
    return last.P, last.value


def running_minimum(records: Sequence[MinimalRecord], X: int) -> MinimalRecord:
    """The record active at height ``X`` (largest ``X_i <= X``)."""
    active = None
    for r in records:
        if r.X <= X:
            active = r
        else:
            break
    if active is None:
        raise ValueError(f"no record at or below height {X}")
    return active


__all__ = [
    "EXHAUSTIVE_DEFAULT_CAP",
    "PrecisionError",
    "best_at_height",
    "build",
    "build_exhaustive",
    "build_lattice",
    "record_value",
    "records_from_pool",
    "running_minimum",
]
