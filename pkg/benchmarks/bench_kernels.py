"""Compare the numba and numpy scan kernels.

    python3 benchmarks/bench_kernels.py [--heights 100 300 500] [--repeat 3]

Prints one line per (kernel, size) with the best wall time and checks that
both implementations nominate the same candidates.
"""

import argparse
import time

import numpy as np

from gelfond2 import kernels
from gelfond2._accel import HAVE_NUMBA
from gelfond2.certreal import AlgebraicReal
from gelfond2.certreal.evaluator import Target


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def canon(arr):
    return arr[np.lexsort(arr.T[::-1])] if len(arr) else arr


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--heights", type=int, nargs="+", default=[100, 300, 500])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba not installed; only the numpy kernels can run")
    xr, xim, x2r, x2im = Target(AlgebraicReal((-2, 0, 0, 1), 1, 2)).floats()
    tol = kernels.float_error_bound(max(args.heights), 4.0) * 2

    if HAVE_NUMBA:  # compile outside the timed region
        kernels.shell_scan_jit(xr, xim, x2r, x2im, 3, 0, 3, tol)
        kernels.box_scan_jit(xr, x2r, 1e-3, 3.0, 3.0, 1e-9)

    print(f"{'kernel':<12}{'size':>8}{'numpy s':>12}{'numba s':>12}{'speedup':>10}")
    for X in args.heights:
        t_np, (m_np, c_np) = best_time(lambda: kernels.shell_scan_numpy(xr, xim, x2r, x2im, X, 0, X, tol), args.repeat)
        line = f"{'shell':<12}{X:>8}{t_np:>12.4f}"
        if HAVE_NUMBA:
            t_jit, (m_jit, c_jit) = best_time(lambda: kernels.shell_scan_jit(xr, xim, x2r, x2im, X, 0, X, tol), args.repeat)
            assert m_np == m_jit and np.array_equal(canon(c_np), canon(c_jit)), "shell kernels disagree"
            line += f"{t_jit:>12.4f}{t_np / t_jit:>10.1f}"
        print(line)

    for X in args.heights:
        b = 0.196 * X * 10  # a wide box so the scan does real work
        t_np, c_np = best_time(lambda: kernels.box_scan_numpy(xr, x2r, 0.5, b, b, 1e-9), args.repeat)
        line = f"{'box':<12}{X:>8}{t_np:>12.4f}"
        if HAVE_NUMBA:
            t_jit, c_jit = best_time(lambda: kernels.box_scan_jit(xr, x2r, 0.5, b, b, 1e-9), args.repeat)
            assert np.array_equal(canon(c_np), canon(c_jit)), "box kernels disagree"
            line += f"{t_jit:>12.4f}{t_np / t_jit:>10.1f}"
        print(line)


if __name__ == "__main__":
    main()
