"""Numba switch.

Kernels are written once in the numba-compatible subset. ``jit_pair`` returns
both the compiled and the plain form so callers (and the benchmark) can pick.
Set ``QLOGIC_DISABLE_NUMBA=1`` to run every dispatcher on the numpy path.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
DISABLED = os.environ.get("QLOGIC_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = HAVE_NUMBA and not DISABLED


def jit_pair(func):
    """Return ``(compiled, plain)``; ``compiled`` is ``plain`` without numba."""
    if numba is None:
        return func, func
    return numba.njit(cache=True)(func), func
