"""Optional numba acceleration.

Set ``GELFOND2_NUMBA=0`` to force the pure-numpy kernels.  The flag is read
once at import time.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("GELFOND2_NUMBA", "1").lower() not in ("0", "false", "no", "off")


def njit(func):
    """``numba.njit(cache=True, nogil=True)`` when numba is importable, else identity."""
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func
