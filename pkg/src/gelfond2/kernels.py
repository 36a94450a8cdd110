"""Floating-point scan kernels.

These only *nominate* candidates.  Callers pass a tolerance that dominates
the rounding error of the double evaluation and certify every nominee with
exact enclosures, so a kernel may over-report but never hides the true
minimiser.

Each kernel has a numba loop version (``*_jit``) and a vectorised numpy
version (``*_numpy``); the public name is bound according to
:data:`gelfond2._accel.USE_NUMBA`.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import USE_NUMBA, njit

# shell scan ------------------------------------------------------------------
#
# The shell of height X holds the integer triples (a0, a1, a2) with
# max |a_k| == X, normalised so the top nonzero coefficient is positive.
# Only a2 in [a2_lo, a2_hi] (a sub-range of [0, X]) is visited, so callers can
# split a shell between workers.


@njit
def _shell_scan_jit(xr, xim, x2r, x2im, X, a2_lo, a2_hi, tol):
    best = np.inf
    for a2 in range(a2_lo, a2_hi + 1):
        a1_start = 0 if a2 == 0 else -X
        for a1 in range(a1_start, X + 1):
            vr = a1 * xr + a2 * x2r
            vi = a1 * xim + a2 * x2im
            if a2 == X or a1 == X or a1 == -X:
                a0 = -vr
                a0 = float(round(a0))
                if a0 > X:
                    a0 = float(X)
                elif a0 < -X:
                    a0 = float(-X)
                v = math.hypot(a0 + vr, vi)
            elif a2 == 0 and a1 == 0:
                v = math.hypot(X + vr, vi)
            else:
                v = min(math.hypot(X + vr, vi), math.hypot(-X + vr, vi))
            if v < best:
                best = v
    thr = best + tol
    # count, then fill
    count = 0
    out = np.empty((0, 3), dtype=np.int64)
    for sweep in range(2):
        if sweep == 1:
            out = np.empty((count, 3), dtype=np.int64)
            count = 0
        for a2 in range(a2_lo, a2_hi + 1):
            a1_start = 0 if a2 == 0 else -X
            for a1 in range(a1_start, X + 1):
                vr = a1 * xr + a2 * x2r
                vi = a1 * xim + a2 * x2im
                if a2 == X or a1 == X or a1 == -X:
                    if thr < abs(vi):
                        continue
                    d = math.sqrt(thr * thr - vi * vi)
                    lo = max(math.ceil(-vr - d), -X)
                    hi = min(math.floor(-vr + d), X)
                    for a0 in range(lo, hi + 1):
                        if sweep == 1:
                            out[count, 0] = a0
                            out[count, 1] = a1
                            out[count, 2] = a2
                        count += 1
                else:
                    for a0 in (X, -X):
                        if a2 == 0 and a1 == 0 and a0 < 0:
                            continue
                        if math.hypot(a0 + vr, vi) <= thr:
                            if sweep == 1:
                                out[count, 0] = a0
                                out[count, 1] = a1
                                out[count, 2] = a2
                            count += 1
    return best, out


def _shell_pairs(X: int, a2_lo: int, a2_hi: int):
    a2s = np.arange(a2_lo, a2_hi + 1, dtype=np.int64)
    a1s = np.arange(-X, X + 1, dtype=np.int64)
    A2 = np.repeat(a2s, a1s.size)
    A1 = np.tile(a1s, a2s.size)
    keep = (A2 > 0) | (A1 >= 0)
    return A2[keep], A1[keep]


def _shell_scan_numpy(xr, xim, x2r, x2im, X, a2_lo, a2_hi, tol):
    A2, A1 = _shell_pairs(X, a2_lo, a2_hi)
    if A2.size == 0:
        return np.inf, np.empty((0, 3), dtype=np.int64)
    vr = A1 * xr + A2 * x2r
    vi = A1 * xim + A2 * x2im
    full = (A2 == X) | (np.abs(A1) == X)
    origin = (A2 == 0) & (A1 == 0)
    a0_near = np.clip(np.rint(-vr), -X, X)
    v_full = np.hypot(a0_near + vr, vi)
    v_pos = np.hypot(X + vr, vi)
    v_neg = np.where(origin, np.inf, np.hypot(-X + vr, vi))
    v = np.where(full, v_full, np.minimum(v_pos, v_neg))
    best = float(v.min())
    thr = best + tol

    rows = []
    # full rows: every a0 in the window |a0 + vr| <= sqrt(thr^2 - vi^2)
    f = full & (np.abs(vi) <= thr)
    if f.any():
        d = np.sqrt(np.maximum(thr * thr - vi[f] * vi[f], 0.0))
        lo = np.maximum(np.ceil(-vr[f] - d), -X).astype(np.int64)
        hi = np.minimum(np.floor(-vr[f] + d), X).astype(np.int64)
        span = int((hi - lo).max(initial=-1))
        for off in range(span + 1):
            a0 = lo + off
            ok = a0 <= hi
            if ok.any():
                rows.append(np.stack([a0[ok], A1[f][ok], A2[f][ok]], axis=1))
    nf = ~full
    for sgn, vals in ((1, v_pos), (-1, v_neg)):
        ok = nf & (vals <= thr)
        if ok.any():
            rows.append(np.stack([np.full(int(ok.sum()), sgn * X), A1[ok], A2[ok]], axis=1))
    if not rows:
        return best, np.empty((0, 3), dtype=np.int64)
    return best, np.concatenate(rows).astype(np.int64)


# box scan --------------------------------------------------------------------
#
# Integer triples in the box |P(x)| <= b0, |P'(x)| <= b1, |P''(x)| <= b2
# (real x), each bound widened by ``slack``.


@njit
def _box_scan_jit(x, x2, b0, b1, b2, slack):
    a2_max = int(math.floor((b2 + slack) / 2.0))
    count = 0
    out = np.empty((0, 3), dtype=np.int64)
    for sweep in range(2):
        if sweep == 1:
            out = np.empty((count, 3), dtype=np.int64)
            count = 0
        for a2 in range(-a2_max, a2_max + 1):
            c = -2.0 * a2 * x
            lo1 = int(math.ceil(c - b1 - slack))
            hi1 = int(math.floor(c + b1 + slack))
            for a1 in range(lo1, hi1 + 1):
                w = -(a1 * x + a2 * x2)
                lo0 = int(math.ceil(w - b0 - slack))
                hi0 = int(math.floor(w + b0 + slack))
                for a0 in range(lo0, hi0 + 1):
                    if sweep == 1:
                        out[count, 0] = a0
                        out[count, 1] = a1
                        out[count, 2] = a2
                    count += 1
    return out


def _box_scan_numpy(x, x2, b0, b1, b2, slack):
    a2_max = int(math.floor((b2 + slack) / 2.0))
    rows = []
    for a2 in range(-a2_max, a2_max + 1):
        c = -2.0 * a2 * x
        a1 = np.arange(math.ceil(c - b1 - slack), math.floor(c + b1 + slack) + 1, dtype=np.int64)
        if a1.size == 0:
            continue
        w = -(a1 * x + a2 * x2)
        lo0 = np.ceil(w - b0 - slack).astype(np.int64)
        hi0 = np.floor(w + b0 + slack).astype(np.int64)
        span = int((hi0 - lo0).max(initial=-1))
        for off in range(span + 1):
            a0 = lo0 + off
            ok = a0 <= hi0
            if ok.any():
                rows.append(np.stack([a0[ok], a1[ok], np.full(int(ok.sum()), a2)], axis=1))
    if not rows:
        return np.empty((0, 3), dtype=np.int64)
    return np.concatenate(rows).astype(np.int64)


if USE_NUMBA:
    shell_scan = _shell_scan_jit
    box_scan = _box_scan_jit
else:
    shell_scan = _shell_scan_numpy
    box_scan = _box_scan_numpy

shell_scan_jit = _shell_scan_jit
shell_scan_numpy = _shell_scan_numpy
box_scan_jit = _box_scan_jit
box_scan_numpy = _box_scan_numpy


def float_error_bound(height: float, modulus: float) -> float:
    """Bound on |fl(P(x)) - P(xi)| for height ``height`` triples.

    Generous: the double evaluation is accurate to a few units of 2**-53
    relative to ``height * (1 + |xi| + |xi|^2)``; we allow 2**-44.
    """
    return (height * (1.0 + modulus + modulus * modulus) + 1.0) * 2.0 ** -44
