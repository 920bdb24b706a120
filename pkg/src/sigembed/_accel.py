"""Numba detection and opt-out.

The hot kernels in ``_kernels`` are compiled with numba when it is
importable.  Setting the environment variable ``SIGEMBED_NO_NUMBA=1``
(checked once, at import time) forces the pure-numpy fallback path, which
produces the same results more slowly.  ``benchmarks/bench_kernels.py``
compares the two paths.
"""

import os

NUMBA_DISABLED = os.environ.get("SIGEMBED_NO_NUMBA", "").strip() not in ("", "0")

if not NUMBA_DISABLED:
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(*args, **kwargs):
        """No-op stand-in so kernel definitions import cleanly."""

        def wrap(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return wrap
