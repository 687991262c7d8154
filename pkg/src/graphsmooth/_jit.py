"""Numba switch.

Hot kernels are written twice: an explicit-loop version compiled with numba
and a vectorized numpy version. ``GRAPHSMOOTH_DISABLE_NUMBA=1`` in the
environment (read once, at import) forces the numpy path; so does a missing
numba install. Both paths stay importable so they can be compared.
"""

import os

# Prefer OpenMP over TBB: older TBB builds trigger a warning on every import.
os.environ.setdefault("NUMBA_THREADING_LAYER_PRIORITY", "omp workqueue tbb")

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None

ENV_FLAG = "GRAPHSMOOTH_DISABLE_NUMBA"

HAVE_NUMBA = numba is not None
NUMBA_DISABLED = os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when numba is installed, otherwise a no-op decorator."""
    if numba is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda func: func
    return numba.njit(*args, **kwargs)


if numba is not None:
    prange = numba.prange
else:  # pragma: no cover
    prange = range


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
