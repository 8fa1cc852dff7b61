"""Backend selection for the compiled kernels.

Every hot kernel exists twice: a loop version compiled with numba and a
vectorised numpy version. ``WCIHODGE_DISABLE_NUMBA=1`` makes the numpy
versions the default; the compiled ones stay importable so the two can be
benchmarked side by side.
"""
import os

_FALSEY = ("", "0", "false", "no", "off")

NUMBA_DISABLED = os.environ.get("WCIHODGE_DISABLE_NUMBA", "").strip().lower() not in _FALSEY

try:
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None

HAVE_NUMBA = _numba is not None
USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise an identity decorator."""
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
