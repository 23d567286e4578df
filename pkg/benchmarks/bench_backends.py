#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback lane.

Usage: python3 benchmarks/bench_backends.py [--sizes 10000,100000,1000000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from wasserinfer.kernels import backend_module

np_lane = backend_module("numpy")
nb_lane = backend_module("numba")


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="10000,100000,1000000")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rng = np.random.default_rng(0)
    print(f"{'kernel':<24} {'n':>9} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}")
    for n in sizes:
        x = np.sort(rng.normal(size=n))
        y = np.sort(rng.normal(0.5, 1.2, size=n))
        t = rng.uniform(1e-6, 1 - 1e-6, size=n)
        key = np.uint64(12345)

        cases = {
            "two_sample_cost": (
                lambda lane: lane.two_sample_cost(x, y, 2.0)),
            "transport_displacement": (
                lambda lane: lane.transport_displacement(x, y, 2.0)),
            "ndtri_vec": (
                lambda lane: lane.ndtri_vec(t)),
            "stream_normals": (
                lambda lane: lane.stream_normals(key, 0, n)),
        }
        for name, call in cases.items():
            call(nb_lane)  # trigger the jit compile outside the timed region
            t_np = best_of(lambda: call(np_lane), args.repeat)
            t_nb = best_of(lambda: call(nb_lane), args.repeat)
            print(f"{name:<24} {n:>9} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f} "
                  f"{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
