"""Compare the compiled and pure-Python simulation kernels.

    python3 benchmarks/bench_kernel.py [--states N] [--machines M] [--repeat R]

Both kernels scan the same index range and must return identical counts.
"""
from __future__ import annotations

import argparse
import time

from ctm._backend import get_kernel
from ctm.counts import DEFAULT_CUTOFFS
from ctm.machines import machine_count


def bench(kernel, n: int, count: int, cutoff: int, repeat: int):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = kernel.scan_range(n, 0, count, cutoff, (0, 1), True)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=3)
    ap.add_argument("--machines", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    n = args.states
    count = min(args.machines, machine_count(n))
    cutoff = DEFAULT_CUTOFFS.get(n, 500)
    kernels = [get_kernel("python")]
    try:
        kernels.append(get_kernel("cython"))
    except ImportError:
        print("compiled kernel not built; timing the Python kernel only")

    timings = {}
    reference = None
    for k in kernels:
        secs, result = bench(k, n, count, cutoff, args.repeat)
        if reference is None:
            reference = result
        elif result != reference:
            raise SystemExit(f"kernel {k.NAME} disagrees with {kernels[0].NAME}")
        timings[k.NAME] = secs
        print(f"{k.NAME:>7}: {count} machines x 2 blanks, cutoff {cutoff}: "
              f"{secs:.3f}s ({2 * count / secs:,.0f} simulations/s)")
    if len(timings) == 2:
        print(f"speedup: {timings['python'] / timings['cython']:.1f}x")


if __name__ == "__main__":
    main()
