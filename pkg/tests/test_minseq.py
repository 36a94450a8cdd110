import io
import math
import random
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from conftest import CBRT2, FIB12, SQRT2, brute_minimum, dirichlet_bound, mp_cbrt2, mp_value, normalize, pigeonhole_gap
from gelfond2.certreal import Enclosure, GAMMA_SQ, Rational, refine
from gelfond2.minseq import (
    MinimalRecord,
    audit_criterion,
    best_at_height,
    build,
    build_exhaustive,
    dumps_records,
    exponent_estimates,
    independent_triples,
    read_records,
    running_minimum,
)
from gelfond2.minseq.audit import det3_rank2
from gelfond2.polyring import Poly, T, content_primitive, height


@pytest.fixture(scope="module")
def cbrt2_records():
    return build_exhaustive(CBRT2, 200)


def _fib_float():
    e = refine(FIB12, 80)
    return float(e.mid)


# best_at_height / build -------------------------------------------------------------


def test_sqrt2_exact_zero():
    p, v = best_at_height(SQRT2, 2)
    assert p == T**2 - 2 and v.is_point and v.lo == 0
    recs = build(SQRT2, 10)
    assert recs[-1].X == 2 and recs[-1].exact_zero and recs[-1].P == T**2 - 2


def test_cbrt2_height_one_matches_enumeration():
    p, v = best_at_height(CBRT2, 1)
    assert p == T - 1
    arg, val = brute_minimum(mp_cbrt2(), 1)
    assert Poly(arg) == p
    assert float(v.lo) <= float(val) <= float(v.hi)


def test_rational_zero_short_circuits():
    p, v = best_at_height(Rational(0), 5)
    assert p == T and v.lo == v.hi == 0


@pytest.mark.parametrize("X", range(1, 7))
def test_best_at_height_matches_brute_force(X):
    with mpmath.workdps(60):
        ref = mpmath.cbrt(2)
        arg, val = brute_minimum(ref, X)
    p, v = best_at_height(CBRT2, X)
    assert p == Poly(arg)
    with mpmath.workdps(60):
        assert mpmath.mpf(v.lo.numerator) / v.lo.denominator <= val * (1 + mpmath.mpf(10) ** -30)
        assert val <= mpmath.mpf(v.hi.numerator) / v.hi.denominator * (1 + mpmath.mpf(10) ** -30)


def test_cbrt2_first_records():
    recs = build(CBRT2, 3)
    assert recs[0].X == 1 and recs[0].P == T - 1
    assert [r.X for r in recs] == [1, 2, 3]


def test_fibonacci_records_against_full_enumeration():
    X_max = 100
    recs = build(FIB12, X_max)
    assert len(recs) >= 4
    # independent oracle: float running minimum over all heights by brute force in numpy
    x = _fib_float()
    a = np.arange(-X_max, X_max + 1)
    a0, a1, a2 = np.meshgrid(a, a, a, indexing="ij")
    vals = np.abs(a0 + a1 * x + a2 * x * x)
    h = np.maximum(np.maximum(np.abs(a0), np.abs(a1)), np.abs(a2))
    vals[h == 0] = np.inf
    per_h = np.full(X_max + 1, np.inf)
    np.minimum.at(per_h, h.ravel(), vals.ravel())
    running = np.minimum.accumulate(per_h[1:])
    drops = [1] + [X for X in range(2, X_max + 1) if running[X - 1] < running[X - 2] * (1 - 1e-9)]
    assert [r.X for r in recs] == drops
    for r in recs:
        assert abs(float(r.value.mid) - running[r.X - 1]) <= 1e-12 * max(1.0, running[r.X - 1]) + 1e-15


def test_build_validates():
    with pytest.raises(ValueError):
        build(CBRT2, 10, backend="nope")


# record invariants (the sequence's defining properties) ------------------------------------


def test_record_invariants(cbrt2_records):
    recs = cbrt2_records
    rng = random.Random(17)
    xi = mp_cbrt2()
    for r, nxt in zip(recs, recs[1:]):
        assert height(r.P) == r.X  # (a)
        assert content_primitive(r.P)[0] == 1
        assert nxt.value.hi < r.value.lo  # (b)
        assert det3_rank2(r.P, nxt.P)  # (d)
        with mpmath.workdps(60):  # (c), probes at heights below X_{i+1}
            v = mp_value(xi, r.P.padded(3))
            for _ in range(100):
                h = rng.randint(1, nxt.X - 1)
                c = [rng.randint(-h, h) for _ in range(3)]
                c[rng.randrange(3)] = rng.choice([h, -h])
                assert mp_value(xi, c) >= v * (1 - mpmath.mpf(10) ** -40)


def test_dirichlet_bound(cbrt2_records):
    xi = float(mp_cbrt2())
    for r, nxt in zip(cbrt2_records, cbrt2_records[1:]):
        if nxt.X >= 2:
            assert float(r.value.hi) <= dirichlet_bound(xi, nxt.X)
            # the pigeonhole oracle: some polynomial of height <= X_{i+1}-1 is at least this good
            if nxt.X - 1 <= 60:
                assert float(r.value.lo) <= pigeonhole_gap(xi, nxt.X - 1) * (1 + 1e-9)


def test_records_json_round_trip(cbrt2_records):
    text = dumps_records(cbrt2_records)
    back = read_records(io.StringIO(text))
    for a, b in zip(cbrt2_records, back):
        assert (a.i, a.X, a.P, a.exact_zero, a.certified) == (b.i, b.X, b.P, b.exact_zero, b.certified)
        assert b.value.lo <= a.value.lo and a.value.hi <= b.value.hi  # rounded outward
    assert dumps_records(back) == text
    assert set(cbrt2_records[0].to_json()) == {"i", "X", "coeffs", "value_lo", "value_hi", "exact_zero", "certified"}


def test_running_minimum(cbrt2_records):
    r = running_minimum(cbrt2_records, 13)
    assert r.X <= 13 < [x.X for x in cbrt2_records if x.X > r.X][0]
    with pytest.raises(ValueError):
        running_minimum(cbrt2_records, 0)


def test_workers_do_not_change_output():
    a = dumps_records(build_exhaustive(CBRT2, 80, workers=1))
    b = dumps_records(build_exhaustive(CBRT2, 80, workers=4))
    assert a == b


def test_lattice_backend_against_exhaustive():
    ex = build(CBRT2, 300)
    la = build(CBRT2, 300, backend="lattice")
    assert all(not r.certified for r in la)
    # every lattice value is a real polynomial's value, so it can't beat the true minimum
    equal = 0
    for r in ex:
        lr = running_minimum(la, r.X)
        assert lr.value.hi >= r.value.lo
        equal += lr.P == r.P
    assert equal / len(ex) >= 0.9


# exponent estimates -------------------------------------------------------------------


def _synthetic(values_and_heights, polys=None):
    out = []
    for k, (v, X) in enumerate(values_and_heights):
        p = polys[k] if polys else Poly((k + 1, 1))
        out.append(MinimalRecord(i=k + 1, X=X, P=p, value=Enclosure._coerce(v), certified=True))
    return out


def test_exponent_examples():
    recs = _synthetic([(F(1, 100), 2), (F(1, 1000), 10)])
    ((i, tau),) = exponent_estimates(recs)
    assert i == 1 and tau.contains(2) and tau.width < F(1, 2**80)
    g2 = GAMMA_SQ.enclosure(100)
    v = Enclosure.point(10).rpow(-g2, 100)
    ((_, tau),) = exponent_estimates(_synthetic([(v, 2), (F(1, 10**5), 10)]))
    assert tau.intersects(g2)


def test_exponent_exact_zero():
    recs = [MinimalRecord(1, 2, T**2 - 2, Enclosure.point(0), True), MinimalRecord(2, 3, T, Enclosure.point(0))]
    assert exponent_estimates(recs)[0][1] is None


# independent triples / audit ------------------------------------------------------------------


def test_independent_triples_synthetic():
    recs = _synthetic([(F(1, 2), 1), (F(1, 3), 2), (F(1, 4), 3)], [Poly((1,)), T, T**2])
    assert independent_triples(recs) == [2]
    recs = _synthetic([(F(1, 2), 1), (F(1, 3), 2), (F(1, 4), 3)], [T, 2 * T, T**2])
    assert independent_triples(recs) == []


def test_audit_synthetic_hypothesis_holds():
    c = F(1, 4)
    g2 = GAMMA_SQ.enclosure(200)
    heights = [1, 3, 9, 27, 81, 243]
    vals = [(c * Enclosure.point(X).rpow(-g2, 200) / 2) for X in heights[1:]] + [F(1, 10**9)]
    recs = _synthetic(list(zip(vals, heights)), [T - 1, T**2 - 2, T + 3, T**2 + T - 1, 2 * T - 1, T**2 - 5])
    rep = audit_criterion(recs, c)
    assert rep.hypothesis_failures == []
    assert all(e.hypothesis_holds for e in rep.entries)


def test_audit_cbrt2(cbrt2_records):
    rep = audit_criterion(cbrt2_records, F(1, 4), xi=CBRT2)
    assert rep.hypothesis_failures
    assert rep.no_polynomial_indices
    assert rep.independent_triples
    assert rep.consecutive_independent
    assert rep.inconclusive == 0
    assert F(2530, 10**4) <= rep.c0.lo and rep.c0.hi <= F(2540, 10**4)
    assert rep.c1 == F(101, 400)
    s = rep.summary()
    assert s["hypothesis_failures"] == len(rep.hypothesis_failures)
    for e in rep.entries:
        assert e.triple_det is None or e.triple_det == 0 or e.i in rep.independent_triples
        assert e.dirichlet_product.lo > 0
        if e.tau is not None:
            assert math.isfinite(float(e.tau.mid))


def test_audit_requires_three_records():
    with pytest.raises(ValueError):
        audit_criterion(_synthetic([(F(1, 2), 1), (F(1, 3), 2)]), F(1, 4))


def test_normalize_oracle_consistency():
    assert normalize((2, -4, -2)) == (-1, 2, 1)
