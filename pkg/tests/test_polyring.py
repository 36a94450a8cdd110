import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CBRT2, SQRT2, mp_cbrt2
from gelfond2.certreal import PrecisionError, Rational
from gelfond2.polyring import (
    Poly,
    T,
    content_primitive,
    derivative,
    det3,
    divides,
    eval_abs,
    exact_quotient,
    gcd_z,
    height,
    is_eisenstein_2,
    mod4_residue,
    real_roots,
    resultant,
    taylor_at,
)


def P(*c):
    return Poly(c)


# examples ---------------------------------------------------------------------


@pytest.mark.parametrize("p, h", [(3 * T**2 - 5 * T + 2, 5), (T, 1), (P(-7), 7), (Poly(), 0)])
def test_height(p, h):
    assert height(p) == h


def test_eval_abs_examples():
    assert eval_abs(T**2 - 2, Rational(F(3, 2))).is_point
    assert eval_abs(T**2 - 2, Rational(F(3, 2))).lo == F(1, 4)
    z = eval_abs(T**2 - 2, SQRT2)
    assert z.is_point and z.lo == 0
    e = eval_abs(T - 1, CBRT2, bits=60)
    assert e.width <= F(1, 2**60)
    ref = float(mp_cbrt2() - 1)
    assert float(e.lo) - 1e-15 <= ref <= float(e.hi) + 1e-15


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=4), st.fractions(-5, 5, max_denominator=100))
def test_eval_abs_rational_is_exact(c, x):
    p = Poly(c)
    e = eval_abs(p, Rational(x))
    assert e.is_point and e.lo == abs(sum(ck * x**k for k, ck in enumerate(c)))


def test_resultant_examples():
    assert resultant(T - 1, T + 1, 1, 1) == 2
    assert resultant(T**2 - 2, T**2 - 3, 2, 2) == 1
    p = 3 * T**2 + T - 7
    assert resultant(p, p, 2, 2) == 0


def test_resultant_errors():
    with pytest.raises(ValueError):
        resultant(Poly(), T, 1, 1)
    with pytest.raises(ValueError):
        resultant(T**2, T, 1, 1)


def test_det3_examples():
    assert det3(P(1), T, T**2) == 1
    p, q = T + 2, T**2 - 1
    assert det3(p, p, q) == 0
    assert abs(det3(T + 1, T - 1, T**2)) == 2


def test_gcd_examples():
    assert gcd_z(T**2 + T - 2, T**2 - 4 * T + 3) == T - 1
    assert gcd_z(T**2 - 2, T**2 - 3).degree == 0
    assert gcd_z(2 * T + 2, 4 * T + 4) == T + 1


def test_content_primitive_examples():
    assert content_primitive(6 * T**2 - 9) == (3, 2 * T**2 - 3)
    assert content_primitive(1 - T) == (1, T - 1)
    assert content_primitive(P(4)) == (4, P(1))
    with pytest.raises(ValueError):
        content_primitive(Poly())


def test_real_roots_examples():
    r = real_roots(T**2 - 1)
    assert len(r) == 2 and r[0].enclosure.contains(-1) and r[1].enclosure.contains(1)
    assert real_roots(T**2 + 1) == []
    (r,) = real_roots(T**3 - 2, bits=50)
    assert r.width <= F(1, 2**50)
    assert float(r.lo) <= float(mp_cbrt2()) <= float(r.hi)
    with pytest.raises(PrecisionError):
        real_roots(T**3 - 2, bits=500, cap=100)


def test_real_roots_multiplicity():
    r = real_roots((T - 1) ** 2 * (T + 2))
    assert [x.multiplicity for x in r] == [1, 2]
    assert r[1].enclosure.contains(1)


def test_derivative_examples():
    assert derivative(T**3) == 3 * T**2
    assert derivative(P(5)).is_zero
    assert derivative(T**2 - 2 * T + 1) == 2 * T - 2


def test_mod4_examples():
    assert mod4_residue(T**3 + 6) == (2, 0, 0, 1)
    assert mod4_residue(4 * T**2) == (0, 0, 0)
    assert mod4_residue(3 - T) == (3, 3)


def test_eisenstein_examples():
    assert is_eisenstein_2(T**3 + 2)
    assert is_eisenstein_2(T**2 + 2)
    assert not is_eisenstein_2(T**2 + 4)
    with pytest.raises(ValueError):
        is_eisenstein_2(2 * T**2 + 4)


def test_text_format():
    p = Poly.from_text("-2 0 1")
    assert p == T**2 - 2
    assert p.to_text(4) == "-2 0 1 0"
    assert Poly().to_text() == "0"
    assert repr(T**2 - 3 * T + 1) == "Poly(T^2 - 3*T + 1)"


def test_division_helpers():
    assert divides(T - 1, T**2 - 1)
    assert exact_quotient(T**2 - 1, T + 1) == T - 1
    with pytest.raises(ValueError):
        exact_quotient(T**2 + 1, T + 1)


def test_taylor_shift():
    p = T**3 - 2 * T + 5
    c = taylor_at(p, 2)
    shifted = Poly(c)
    for x in range(-3, 4):
        assert shifted(x) == p(x + 2)


# properties -----------------------------------------------------------------------


def _rand_poly(rng, deg, bound=50):
    while True:
        c = [rng.randint(-bound, bound) for _ in range(deg + 1)]
        if c[-1]:
            return Poly(c)


def test_resultant_vanishes_iff_common_factor():
    rng = random.Random(2024)
    zeros = 0
    for k in range(10_000):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        p = _rand_poly(rng, m)
        # plant a common factor in a share of the instances so both sides are exercised
        if k % 4 == 0:
            lin = Poly((rng.randint(-5, 5), rng.choice([1, 2, 3])))
            p = lin * _rand_poly(rng, m - 1, 7) if m > 1 else lin
            q = lin * _rand_poly(rng, n - 1, 7) if n > 1 else lin
        else:
            q = _rand_poly(rng, n)
        res = resultant(p, q, m, n)
        zeros += res == 0
        assert (res == 0) == (gcd_z(p, q).degree >= 1), (p, q)
    assert zeros >= 2000


def test_resultant_multiplicativity():
    rng = random.Random(11)
    for _ in range(500):
        p = _rand_poly(rng, rng.randint(1, 2), 20)
        q1, q2 = _rand_poly(rng, 1, 20), _rand_poly(rng, 1, 20)
        m = p.degree
        assert resultant(p, q1 * q2, m, 2) == resultant(p, q1, m, 1) * resultant(p, q2, m, 1)


def _disc_cubic(d, c, b, a):
    # a T^3 + b T^2 + c T + d
    return 18 * a * b * c * d - 4 * b**3 * d + b * b * c * c - 4 * a * c**3 - 27 * a * a * d * d


def test_real_roots_count_against_discriminant():
    rng = random.Random(5)
    for _ in range(1000):
        p = _rand_poly(rng, 3, 30)
        if rng.random() < 0.1:  # force some repeated roots
            r, s = rng.randint(-4, 4), rng.randint(-4, 4)
            p = (T - r) ** 2 * (T - s) * rng.choice([1, -1])
        disc = _disc_cubic(*p.coeffs)
        a, b, c = p.coeffs[3], p.coeffs[2], p.coeffs[1]
        roots = real_roots(p, bits=30)
        if disc > 0:
            expected = 3
        elif disc < 0:
            expected = 1
        else:
            expected = 1 if b * b == 3 * a * c else 2  # triple root vs double+simple
        assert len(roots) == expected, p
        assert sum(r.multiplicity for r in roots) == (3 if disc >= 0 else 1)
        for x, y in zip(roots, roots[1:]):
            assert x.hi < y.lo
        for r in roots:
            assert r.width <= F(1, 2**30)
            if r.multiplicity % 2 and r.lo != r.hi:
                assert p(r.lo) * p(r.hi) < 0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=4).filter(any))
def test_content_primitive_recomposes(c):
    p = Poly(c)
    g, prim = content_primitive(p)
    assert g > 0 and prim.lead > 0
    assert content_primitive(prim)[0] == 1
    assert g * prim in (p, -p)
