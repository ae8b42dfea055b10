#!/usr/bin/env python3
"""Benchmark the compiled banded RK4 kernel against the numpy fallback.

The stepped integrator is the hot loop of every long propagation run; this
script times both backends on the same junction problem and reports the
speedup, plus the one-shot dense diagonalization for scale.

Run:
    python benchmarks/bench_kernels.py [--sites 1600] [--steps 20000]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from nhls import ModelParams, assemble, gaussian_packet, junction_spec
from nhls import _kernels_py

try:
    from nhls import _kernels
except ImportError:
    _kernels = None


def time_backend(impl, H, psi0, dt, n_steps, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl.rk4_evolve(H.diag_gamma, H.hops, H.ring_bond, psi0, dt, n_steps, n_steps)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sites", type=int, default=1600)
    parser.add_argument("--steps", type=int, default=20000)
    parser.add_argument("--dt", type=float, default=0.01)
    args = parser.parse_args()

    params = ModelParams()
    seg = 2 * (args.sites // 8)  # gain/loss segment length must be even
    spec = junction_spec(args.sites - seg, seg)
    H = assemble(spec, params)
    psi0 = gaussian_packet(0.04, -args.sites // 8, -np.pi / 2, spec).amps

    print(f"sites={args.sites} steps={args.steps} dt={args.dt}")
    t_py = time_backend(_kernels_py, H, psi0, args.dt, args.steps)
    rate_py = args.steps / t_py
    print(f"  numpy fallback : {t_py:8.3f} s  ({rate_py:9.0f} steps/s)")

    if _kernels is None:
        print("  compiled kernel: not built (pip install -e . rebuilds it)")
    else:
        t_c = time_backend(_kernels, H, psi0, args.dt, args.steps)
        rate_c = args.steps / t_c
        print(f"  compiled kernel: {t_c:8.3f} s  ({rate_c:9.0f} steps/s)")
        print(f"  speedup        : {t_py / t_c:8.1f}x")
        a = _kernels.rk4_evolve(H.diag_gamma, H.hops, H.ring_bond, psi0, args.dt, 500, 500)
        b = _kernels_py.rk4_evolve(H.diag_gamma, H.hops, H.ring_bond, psi0, args.dt, 500, 500)
        print(f"  agreement      : {np.max(np.abs(a - b)):.2e} after 500 steps")

    t0 = time.perf_counter()
    np.linalg.eig(H.matrix)
    print(f"  dense eig      : {time.perf_counter() - t0:8.3f} s (one-shot, same size)")


if __name__ == "__main__":
    main()
