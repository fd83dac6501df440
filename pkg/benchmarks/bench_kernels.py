"""Native (Cython) versus fallback (numpy/Python) kernel timings.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--grid 200]

Prints one line per kernel with the best-of-N wall time for each backend
and the speedup. The native column is skipped when the extension is absent.
"""

import argparse
import math
import time

import numpy as np

from kickosc import _fallback

try:
    from kickosc import _native
except ImportError:
    _native = None


def best_of(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(grid):
    rng = np.random.default_rng(0)
    tt, kk = np.meshgrid(np.linspace(0.1, 4 * math.pi, grid), np.linspace(-5, 5, grid), indexing="ij")
    kr, th = rng.uniform(-5, 5, 200), rng.uniform(0.1, 4 * math.pi, 200)
    return [
        ("u_recurrence n=1e6", lambda m: m.u_recurrence(1_000_000, 0.73)),
        ("direct_product 200 schedules n=200",
         lambda m: [m.direct_product(a, b, 200) for a, b in zip(kr, th)]),
        ("log_energy_trajectory n=1e5", lambda m: m.log_energy_trajectory(0.8, 1.3, 100_000)),
        (f"probe_summary {grid}x{grid} grid n=500",
         lambda m: m.probe_summary(kk.ravel(), tt.ravel(), 500, 200)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--grid", type=int, default=200)
    args = ap.parse_args()
    print(f"{'kernel':40s} {'python [s]':>11s} {'native [s]':>11s} {'speedup':>8s}")
    for name, fn in cases(args.grid):
        py = best_of(lambda: fn(_fallback), args.repeat)
        if _native is None:
            print(f"{name:40s} {py:11.4f} {'-':>11s} {'-':>8s}")
            continue
        nat = best_of(lambda: fn(_native), args.repeat)
        print(f"{name:40s} {py:11.4f} {nat:11.4f} {py / nat:7.1f}x")


if __name__ == "__main__":
    main()
