import random
from fractions import Fraction as F

import pytest

from gelfond2.lattice import inverse_unimodular, lll
from gelfond2.polyring import det_int


def _gso(b):
    out, norms = [], []
    mu = [[F(0)] * len(b) for _ in b]
    for i, row in enumerate(b):
        v = [F(x) for x in row]
        for j in range(i):
            mu[i][j] = sum(F(x) * y for x, y in zip(row, out[j])) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, out[j])]
        out.append(v)
        norms.append(sum(x * x for x in v))
    return mu, norms


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


@pytest.mark.parametrize("seed", range(30))
def test_lll_is_reduced_and_unimodular(seed):
    rng = random.Random(seed)
    while True:
        basis = [[rng.randint(-10**6, 10**6) for _ in range(3)] for _ in range(3)]
        if det_int(basis):
            break
    red, u = lll(basis)
    assert abs(det_int(u)) == 1
    assert _matmul(u, basis) == red
    mu, norms = _gso(red)
    for i in range(3):
        for j in range(i):
            assert abs(mu[i][j]) <= F(1, 2)
    for k in range(1, 3):
        assert norms[k] >= (F(99, 100) - mu[k][k - 1] ** 2) * norms[k - 1]


def test_lll_rejects_dependent_rows():
    with pytest.raises(ValueError):
        lll([[1, 2, 3], [2, 4, 6], [0, 0, 1]])


def test_inverse_unimodular():
    m = [[2, 1, 0], [1, 1, 0], [5, 3, 1]]
    inv = inverse_unimodular(m)
    assert _matmul(m, inv) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    with pytest.raises(ValueError):
        inverse_unimodular([[2, 0, 0], [0, 1, 0], [0, 0, 1]])
