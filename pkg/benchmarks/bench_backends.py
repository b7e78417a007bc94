#!/usr/bin/env python3
"""Compare the compiled kernel extension against the numpy fallback.

Usage: python benchmarks/bench_backends.py [--points N] [--repeats K]
"""

import argparse

from greybox_stability import kernels
from greybox_stability.benchmarks import run_backend_benchmark


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=5000)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()
    rows = run_backend_benchmark(points=args.points, repeats=args.repeats)
    print(f"active backend: {kernels.BACKEND}")
    print(f"available backends: {', '.join(kernels.available_backends())}")
    print(f"{'kernel':<24} {'backend':<8} {'best seconds':>14}")
    by_kernel = {}
    for row in rows:
        print(f"{row['kernel']:<24} {row['backend']:<8} {row['seconds']:>14.6f}")
        by_kernel.setdefault(row["kernel"], {})[row["backend"]] = row["seconds"]
    for kernel_name, timing in by_kernel.items():
        if "cython" in timing and "python" in timing:
            ratio = timing["python"] / timing["cython"]
            print(f"{kernel_name}: compiled is {ratio:.2f}x the pure-python speed")


if __name__ == "__main__":
    main()
