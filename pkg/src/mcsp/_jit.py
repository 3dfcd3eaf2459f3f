"""Backend switch for the hot kernels.

Set ``MCSP_JIT=0`` to run every kernel as plain Python over numpy arrays.
Numba is optional; without it the fallback is used silently.
"""
import os

USE_JIT = os.getenv("MCSP_JIT", "1").lower() not in ("0", "false", "no", "off")

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover
    _njit = None
    USE_JIT = False


def nojit(f):
    return f


def njit_(f):
    if not USE_JIT:
        return f
    return _njit(f, cache=True, nogil=True)


def backend_name():
    return "numba" if USE_JIT else "python"
