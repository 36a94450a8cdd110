import itertools
import math

import mpmath
import pytest

from gelfond2.certreal import AlgebraicReal, ContinuedFraction, FibonacciWord, Rational

CBRT2 = AlgebraicReal((-2, 0, 0, 1), 1, 2)
SQRT2 = AlgebraicReal((-2, 0, 1), 1, 2)
FIB12 = ContinuedFraction(FibonacciWord(1, 2))


@pytest.fixture
def cbrt2():
    return CBRT2


@pytest.fixture
def sqrt2():
    return SQRT2


@pytest.fixture
def fib12():
    return FIB12


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("GELFOND2_CACHE_DIR", str(tmp_path / "cache"))


# independent oracles ---------------------------------------------------------
#
# These deliberately avoid the package's enclosure code: values come from
# mpmath at high working precision, continued fractions from the textbook
# convergent recurrence.


def mp_value(xi_mp, coeffs):
    return abs(sum(mpmath.mpf(c) * xi_mp**k for k, c in enumerate(coeffs)))


def mp_cbrt2(dps=60):
    with mpmath.workdps(dps):
        return mpmath.cbrt(2)


def convergents(quotients, a0=0):
    """Classical p_k/q_k recurrence."""
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    out = [(p, q)]
    for a in quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append((p, q))
    return out


def normalize(c):
    c = list(c)
    g = math.gcd(*c)
    c = [v // g for v in c]
    for v in reversed(c):
        if v:
            if v < 0:
                c = [-x for x in c]
            break
    return tuple(c)


def brute_minimum(xi_mp, X, dps=60):
    """Exhaustive minimiser over height <= X with tie-break smallest (c2, c1, c0)."""
    best, arg = None, None
    with mpmath.workdps(dps):
        for c in itertools.product(range(-X, X + 1), repeat=3):
            if not any(c):
                continue
            c = normalize(c)
            v = mp_value(xi_mp, c)
            key = (v, (c[2], c[1], c[0]))
            if best is None or key < best:
                best, arg = key, c
    return arg, best[0]


def pigeonhole_gap(x: float, X: int) -> float:
    """Smallest gap among the (X+1)^3 numbers a0 + a1 x + a2 x^2, a_k in 0..X.

    Two distinct triples at that gap differ by a nonzero polynomial of height
    at most X, so the gap bounds p_X from above.
    """
    import numpy as np

    a = np.arange(X + 1, dtype=float)
    vals = (a[:, None, None] + a[None, :, None] * x + a[None, None, :] * x * x).ravel()
    vals.sort()
    return float(np.diff(vals).min())


def dirichlet_bound(abs_xi: float, X: int) -> float:
    return (1 + abs_xi + abs_xi**2) * (X - 1) ** -2.0


__all__ = [
    "CBRT2",
    "FIB12",
    "SQRT2",
    "Rational",
    "brute_minimum",
    "convergents",
    "dirichlet_bound",
    "mp_cbrt2",
    "mp_value",
    "normalize",
    "pigeonhole_gap",
]
