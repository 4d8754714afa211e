#!/usr/bin/env python3
"""Benchmark the numba-jitted hot kernels against their pure-numpy fallbacks.

Run from the repository root:

    python benchmarks/bench_kernels.py

The jitted path must be available (do not set QUENCHLAB_NO_NUMBA); both
paths are imported explicitly so they can be timed side by side.  A warmup
call absorbs JIT compilation before timing.
"""

import time

import numpy as np

from quenchlab._accel import NUMBA_ENABLED
from quenchlab.bessel import _row_backward_jit, _row_backward_py
from quenchlab.ising_exact import _mode_tables_jit, _mode_tables_loop, _mode_tables_numpy


def timeit(fn, *args, repeat=5):
    fn(*args)  # warmup / compile
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_bessel_rows():
    print("bessel row (Miller backward recurrence), lemma-grid workload")
    print(f"{'z-grid':>12} {'n_max':>6} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>8}")
    for z_max, n_extra in [(10.0, 80), (50.0, 80)]:
        zs = np.arange(1.0, z_max + 1e-9, 0.1)

        def sweep(impl):
            def run():
                for z in zs:
                    impl(float(z), int(np.ceil(z)) + n_extra)
            return run

        t_py = timeit(sweep(_row_backward_py))
        t_jit = timeit(sweep(_row_backward_jit))
        print(f"{f'[1,{z_max}]':>12} {n_extra:>6} {t_py:12.4f} {t_jit:12.4f} {t_py / t_jit:8.1f}x")


def bench_mode_tables():
    # the numpy FFT path wins here at every N (O(N log N) vs the O(N^2)
    # loop), which is why it is the package default for this kernel
    print("\nmode-function tables f_n, g_n for n = 0..N-1")
    print(f"{'N':>6} {'numpy fft (s)':>14} {'numba loop (s)':>15} {'ratio':>8}")
    for n_sites in (101, 501, 2001):
        t_np = timeit(_mode_tables_numpy, n_sites, 6.0)
        t_jit = timeit(_mode_tables_jit, n_sites, 6.0)
        print(f"{n_sites:>6} {t_np:14.6f} {t_jit:15.6f} {t_np / t_jit:8.2f}x")
    f1, g1 = _mode_tables_loop(101, 6.0)
    f2, g2 = _mode_tables_numpy(101, 6.0)
    dev = max(float(np.max(np.abs(f1 - f2))), float(np.max(np.abs(g1 - g2))))
    print(f"agreement between the two implementations: {dev:.2e}")


if __name__ == "__main__":
    if not NUMBA_ENABLED:
        raise SystemExit("numba path disabled; unset QUENCHLAB_NO_NUMBA to benchmark both")
    bench_bessel_rows()
    bench_mode_tables()
