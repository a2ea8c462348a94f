"""Kernel backend selection.

Hot loops are written twice: an ``@njit`` loop version and a vectorized numpy
version.  The loop versions are used when numba imports cleanly and the
``FREESTATES_DISABLE_NUMBA`` environment variable is unset (or ``0``).
"""

import os

_DISABLED = os.environ.get("FREESTATES_DISABLE_NUMBA", "0").strip().lower() not in (
    "",
    "0",
    "false",
    "no",
)

try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED


def njit(fn):
    """Compile ``fn`` with numba when available, otherwise return it unchanged."""
    if HAVE_NUMBA:
        return _numba_njit(cache=True)(fn)
    return fn


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
