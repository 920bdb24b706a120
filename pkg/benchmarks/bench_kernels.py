#!/usr/bin/env python3
"""Benchmark the compiled and pure-numpy kernel backends.

The arc-length quadrature and its root inversion dominate the runtime of
grid embeddings and the verification battery.  This script times both
backends on the same workloads and prints the speedup.  Run with
SIGEMBED_NO_NUMBA=1 to see what the package falls back to without numba.
"""

import time

import numpy as np

from sigembed import _kernels as kernels
from sigembed.config import NumericConfig

CFG = NumericConfig()
MAX_PANELS = 100 * CFG.max_iterations
ROOT_ARGS = (CFG.quad_abs_tol, CFG.quad_rel_tol, CFG.root_tol,
             CFG.max_iterations, MAX_PANELS)


def time_scalar(func, values, args, repeats=3):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        for v in values:
            func(v, *args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    print("=" * 72)
    print("KERNEL BACKEND BENCHMARK")
    print(f"numba active in package: {kernels.NUMBA_ENABLED}")
    print("=" * 72)

    thetas = np.linspace(-20.0, 0.69, 400)
    ts = np.linspace(-10.0, 10.0, 200)

    if kernels.arc_core_numba is not None:
        # trigger JIT compilation outside the timed region
        kernels.arc_core_numba(0.3, CFG.quad_abs_tol, CFG.quad_rel_tol, MAX_PANELS)
        kernels.theta_root_numba(1.0, *ROOT_ARGS)

    rows = []
    t_np = time_scalar(kernels.arc_core_numpy, thetas,
                       (CFG.quad_abs_tol, CFG.quad_rel_tol, MAX_PANELS))
    rows.append(("arc integral x400", "numpy", t_np, None))
    if kernels.arc_core_numba is not None:
        t_nb = time_scalar(kernels.arc_core_numba, thetas,
                           (CFG.quad_abs_tol, CFG.quad_rel_tol, MAX_PANELS))
        rows.append(("arc integral x400", "numba", t_nb, t_np / t_nb))

    t_np = time_scalar(kernels.theta_root_numpy, ts, ROOT_ARGS)
    rows.append(("theta inversion x200", "numpy", t_np, None))
    if kernels.theta_root_numba is not None:
        t_nb = time_scalar(kernels.theta_root_numba, ts, ROOT_ARGS)
        rows.append(("theta inversion x200", "numba", t_nb, t_np / t_nb))

    print(f"{'workload':24s} {'backend':8s} {'seconds':>10s} {'speedup':>9s}")
    for name, backend, seconds, speedup in rows:
        tag = f"{speedup:8.1f}x" if speedup else "        -"
        print(f"{name:24s} {backend:8s} {seconds:10.4f} {tag}")

    # the active-path batch wrappers, as the library calls them
    start = time.perf_counter()
    _, status = kernels.theta_root_batch(np.linspace(-100, 100, 1000), CFG)
    elapsed = time.perf_counter() - start
    print("-" * 72)
    print(f"active batch path: 1000 inversions in {elapsed:.3f}s "
          f"({'ok' if (status == 0).all() else 'FAILED'})")


if __name__ == "__main__":
    main()
