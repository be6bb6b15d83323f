#!/usr/bin/env python3
"""Time the steering and SL(2) kernels: numba against the pure-Python path.

The pure path is the exact same function object before jitting, so the
comparison isolates compilation benefit.  Run from the repository root:

    python benchmarks/bench_kernels.py --steps 16384 --repeats 20
"""

import argparse
import time

import numpy as np
from numba import njit

from bikefronts.kernels import _sl2_rk4_impl, _steering_rk4_impl


def fields(n_steps):
    u = np.arange(2 * n_steps + 1) * (2 * np.pi / (2 * n_steps))
    sigma = 0.84 * (1.0 + 0.05 * np.cos(u))
    kappa = 0.64 + 0.1 * np.sin(2 * u)
    return sigma, kappa


def time_call(fn, repeats, *args):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=16384)
    ap.add_argument("--repeats", type=int, default=20)
    args = ap.parse_args()

    n = args.steps
    sigma, kappa = fields(n)
    h = 2 * np.pi / n
    c0 = 1.830487721712452  # cot(0.5)

    steering_nb = njit(cache=True, fastmath=False)(_steering_rk4_impl)
    sl2_nb = njit(cache=True, fastmath=False)(_sl2_rk4_impl)

    out_a = np.empty(n + 1)
    out_u = np.empty(4)

    # warmup compiles and verifies both paths agree
    steering_nb(sigma, kappa, c0, h, n, 1, 2.5, out_a)
    ref_a = out_a.copy()
    _steering_rk4_impl(sigma, kappa, c0, h, n, 1, 2.5, out_a)
    assert np.allclose(ref_a, out_a, rtol=1e-13)
    sl2_nb(sigma, kappa, c0, h, n, out_u)
    ref_u = out_u.copy()
    _sl2_rk4_impl(sigma, kappa, c0, h, n, out_u)
    assert np.allclose(ref_u, out_u, rtol=1e-12)

    rows = [
        ("steering RK4", steering_nb, _steering_rk4_impl, (sigma, kappa, c0, h, n, 1, 2.5, out_a)),
        ("SL(2) RK4", sl2_nb, _sl2_rk4_impl, (sigma, kappa, c0, h, n, out_u)),
    ]
    print(f"{args.steps} steps, best of {args.repeats}")
    print(f"{'kernel':<14} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for name, fast, slow, call_args in rows:
        t_fast = time_call(fast, args.repeats, *call_args)
        t_slow = time_call(slow, max(3, args.repeats // 4), *call_args)
        print(f"{name:<14} {t_fast * 1e3:>10.3f}ms {t_slow * 1e3:>10.3f}ms {t_slow / t_fast:>8.1f}x")


if __name__ == "__main__":
    main()
