"""Kernel backend selection.

Hot numeric loops (ray casting, grid Dijkstra) are compiled with numba by
default. Set ZOOSIM_BACKEND=numpy to run the pure-numpy fallbacks instead;
both paths implement identical semantics and the test suite asserts parity.
`zoosim kernel-bench` compares their throughput.
"""

import os

_requested = os.environ.get("ZOOSIM_BACKEND", "auto").strip().lower()

if _requested in ("", "auto", "numba"):
    try:
        import numba  # noqa: F401
        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        BACKEND = "numpy"
elif _requested in ("numpy", "python"):
    BACKEND = "numpy"
else:
    raise ValueError(f"unknown ZOOSIM_BACKEND={_requested!r} (use numba|numpy|auto)")

NUMBA_ENABLED = BACKEND == "numba"


def maybe_njit(func):
    """Compile with numba when the backend allows, else return func as-is."""
    if NUMBA_ENABLED:
        from numba import njit

        return njit(cache=True)(func)
    return func
