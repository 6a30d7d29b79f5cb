"""Time the propagation kernel: compiled gather versus the NumPy fallback.

Usage: python3 benchmarks/bench_step.py [--dim D] [--steps N] [--repeat R]
"""

import argparse
import time

import numpy as np

from phasewalk import coins
from phasewalk.kernels import HAVE_COMPILED, step_kernel, step_numpy
from phasewalk.lattice import LatticeIndex


def bench(fn, src, out, mat, phases, neighbor, n_src, n_dst, steps, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(steps):
            fn(src, out, mat, phases, neighbor, n_src, n_dst)
        best = min(best, time.perf_counter() - t0)
    return best / steps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--radius", type=int, default=40)
    ap.add_argument("--steps", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    size = 2 * args.dim
    index = LatticeIndex(args.dim, args.radius)
    n_src = index.n_sites(0)
    n_dst = index.n_sites(1)
    rng = np.random.default_rng(0)
    src = (rng.normal(size=(n_src, size)) + 1j * rng.normal(size=(n_src, size)))
    out = np.empty((n_dst, size), dtype=np.complex128)
    mat = coins.grover_coin(size).astype(np.complex128)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size))

    print(f"dim={args.dim} radius={args.radius}: {n_src} source sites, "
          f"{n_dst} destination sites, coin size {size}")
    t_np = bench(step_numpy, src, out, mat, phases, index.neighbor[1],
                 n_src, n_dst, args.steps, args.repeat)
    print(f"numpy fallback : {t_np * 1e3:8.3f} ms/step")
    if HAVE_COMPILED:
        t_cy = bench(step_kernel, src, out, mat, phases, index.neighbor[1],
                     n_src, n_dst, args.steps, args.repeat)
        print(f"compiled gather: {t_cy * 1e3:8.3f} ms/step  "
              f"({t_np / t_cy:.2f}x vs numpy)")
    else:
        print("compiled gather: not available (pure-python install)")


if __name__ == "__main__":
    main()
