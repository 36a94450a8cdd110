import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import CBRT2, FIB12
from gelfond2 import kernels
from gelfond2._accel import HAVE_NUMBA
from gelfond2.certreal import ComplexRect, Rational
from gelfond2.certreal.evaluator import Target


def canon(a):
    return a[np.lexsort(a.T[::-1])] if len(a) else a


def test_float_bound_positive():
    assert 0 < kernels.float_error_bound(100, 2.0) < 1e-9


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("xi", [CBRT2, FIB12, ComplexRect(Rational(0), Rational(1))])
@pytest.mark.parametrize("X, lo, hi", [(1, 0, 1), (7, 0, 7), (40, 0, 40), (40, 10, 20)])
def test_shell_kernels_agree(xi, X, lo, hi):
    f = Target(xi).floats()
    tol = kernels.float_error_bound(X, 4.0) * 2
    m1, c1 = kernels.shell_scan_numpy(*f, X, lo, hi, tol)
    m2, c2 = kernels.shell_scan_jit(*f, X, lo, hi, tol)
    assert m1 == m2
    assert np.array_equal(canon(c1), canon(c2))


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("b", [0.5, 3.0, 40.0])
def test_box_kernels_agree(b):
    x, _, x2, _ = Target(CBRT2).floats()
    c1 = kernels.box_scan_numpy(x, x2, 0.5, b, b, 1e-9)
    c2 = kernels.box_scan_jit(x, x2, 0.5, b, b, 1e-9)
    assert np.array_equal(canon(c1), canon(c2))


def test_env_flag_selects_numpy():
    code = (
        "from gelfond2 import kernels, _accel;"
        "print(_accel.USE_NUMBA, kernels.shell_scan is kernels.shell_scan_numpy)"
    )
    env = dict(os.environ, GELFOND2_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]
