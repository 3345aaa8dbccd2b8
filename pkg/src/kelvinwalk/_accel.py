"""Backend switch for the hot kernels.

Set ``KELVINWALK_DISABLE_NUMBA=1`` to force the pure-numpy path (also used
automatically when numba cannot be imported).
"""
import os

_FLAG = os.environ.get("KELVINWALK_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG not in ("", "0", "false", "no")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV


def njit(*args, **kwargs):
    """``numba.njit`` when numba is usable, otherwise a no-op decorator."""
    if USE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def default_backend():
    return "numba" if USE_NUMBA else "numpy"


def resolve_backend(backend=None):
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not USE_NUMBA:
        why = "disabled by KELVINWALK_DISABLE_NUMBA" if HAVE_NUMBA else "not installed"
        raise RuntimeError(f"numba backend requested but numba is {why}")
    return backend
