"""Optional numba acceleration for the hot numeric kernels.

The package ships two implementations of every hot kernel: a plain-numpy
path and a numba ``@njit`` path compiled from the same (or an equivalent)
loop body.  The jitted path is the default.  Setting the environment
variable ``QUENCHLAB_NO_NUMBA=1`` before import forces the numpy path; the
same fallback is selected automatically when numba is not installed.

``benchmarks/bench_kernels.py`` times both paths side by side.
"""

from __future__ import annotations

import os
import warnings


class PerformanceWarning(UserWarning):
    pass


def _env_disabled() -> bool:
    return os.environ.get("QUENCHLAB_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}


NUMBA_ENABLED = False
if not _env_disabled():
    try:
        from numba import njit as _njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - exercised only without numba
        warnings.warn(
            "numba is not installed; hot kernels run on the pure-numpy fallback path",
            PerformanceWarning,
            stacklevel=2,
        )


def jit_kernel(func):
    """Compile ``func`` with numba when enabled, otherwise return it unchanged."""
    if NUMBA_ENABLED:
        return _njit(cache=True)(func)
    return func
