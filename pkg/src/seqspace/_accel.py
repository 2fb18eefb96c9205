"""Kernel backend selection.

Hot loops are written once as plain Python loops and compiled with numba's
``njit`` when available. Setting ``SEQSPACE_NO_NUMBA=1`` (read at import time)
switches every kernel to its vectorised numpy counterpart instead.
"""

import os

USE_NUMBA = os.environ.get("SEQSPACE_NO_NUMBA", "").strip().lower() not in ("1", "true", "yes")

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None
    USE_NUMBA = False


def njit(func):
    """Compile ``func`` with numba if present, else return it unchanged."""
    if _njit is None:
        return func
    return _njit(cache=True)(func)


def backend():
    return "numba" if USE_NUMBA else "numpy"


def pick(numba_impl, numpy_impl):
    return numba_impl if USE_NUMBA else numpy_impl
