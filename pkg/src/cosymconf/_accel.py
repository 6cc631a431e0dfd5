"""Backend switch for the compiled kernels.

Set ``COSYMCONF_DISABLE_NUMBA=1`` to force the pure-numpy path. The flag is
read once at import time.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FLAG = os.environ.get("COSYMCONF_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG not in ("", "0", "false", "no")

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise.

    Decoration is independent of ``USE_NUMBA`` so both paths stay callable
    side by side (tests and the benchmark compare them).
    """
    if numba is None:
        return func
    return numba.njit(cache=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
