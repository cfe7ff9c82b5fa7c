#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Workloads mirror the certification hot path: extended Horner over a
certification grid (1536 points) at harness-scale truncation orders, and
the truncated Cauchy product used by series arithmetic.

Usage: python benchmarks/bench_kernels.py [--repeats 30]
"""

import argparse
import time

import numpy as np

from schlicht import _kernels
from schlicht._kernels import _fallback


def _workloads():
    rng = np.random.default_rng(0)
    theta = 2.0 * np.pi * np.arange(1536) / 1536
    grid = np.concatenate([r * np.exp(1j * theta)
                           for r in (0.5, 0.85, 0.95)])[:1536]
    for order in (64, 256, 512):
        coeffs = rng.normal(size=order + 1) + 1j * rng.normal(size=order + 1)
        yield (f"horner_triple N={order} P={grid.size}",
               lambda m, c=coeffs: m.horner_triple(c, grid))
        yield (f"horner_pair   N={order} P={grid.size}",
               lambda m, c=coeffs: m.horner_pair(c, grid))
    a = rng.normal(size=257) + 1j * rng.normal(size=257)
    b = rng.normal(size=257) + 1j * rng.normal(size=257)
    yield ("cauchy_truncated N=256",
           lambda m: m.cauchy_truncated(a, b, 257))


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=30)
    args = parser.parse_args()

    if not _kernels.COMPILED_AVAILABLE:
        print("compiled kernels not built; only timing the fallback")
    backends = [("python", _fallback)]
    if _kernels.COMPILED_AVAILABLE:
        from schlicht._kernels import _core
        backends.append(("compiled", _core))

    print(f"{'workload':34s}" + "".join(f"{name:>12s}" for name, _ in backends)
          + ("     speedup" if len(backends) == 2 else ""))
    for label, call in _workloads():
        times = [_time(lambda m=mod: call(m), args.repeats)
                 for _, mod in backends]
        row = f"{label:34s}" + "".join(f"{t * 1e3:9.3f} ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:11.2f}x"
        print(row)


if __name__ == "__main__":
    main()
