"""Backend switch for the compiled kernels.

Set ``CVPULSE_DISABLE_NUMBA=1`` before importing :mod:`cvpulse` to force the
pure-numpy code paths (useful for debugging and for the benchmark script).
"""
import os

_FLAG = os.environ.get("CVPULSE_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(fn):
    """``numba.njit(cache=True)`` when numba is available, identity otherwise."""
    if numba is None:
        return fn
    return numba.njit(cache=True)(fn)
