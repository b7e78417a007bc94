"""Timing comparison of the compiled and pure-python kernel backends."""

from __future__ import annotations

import time

import numpy as np

from . import kernels


def _sample_inputs(points: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    coeffs = (rng.standard_normal(9) + 1j * rng.standard_normal(9)).astype(np.complex128)
    s = 1j * np.linspace(-6283.0, 6283.0, points).astype(np.complex128)
    g = (rng.standard_normal((points, 2, 2)) + 1j * rng.standard_normal((points, 2, 2))).astype(
        np.complex128
    )
    # a smooth non-vanishing path for the winding kernel
    t = np.linspace(0.0, 2.0 * np.pi, points)
    z = (2.0 + np.cos(3.0 * t) + 1j * np.sin(2.0 * t)).astype(np.complex128)
    return coeffs, s, np.ascontiguousarray(g), np.ascontiguousarray(z)


def _best_of(fn, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return float(best)


def run_backend_benchmark(points: int = 5000, repeats: int = 5) -> list[dict]:
    """Run every kernel on identical inputs for each available backend."""
    coeffs, s, g, z = _sample_inputs(points)
    rows: list[dict] = []
    for name in kernels.available_backends():
        impl = kernels.load_backend(name)
        cases = (
            ("polyval_many", lambda: impl.polyval_many(coeffs, s)),
            ("det_return_difference", lambda: impl.det_return_difference(g)),
            ("eigvals_2x2_paired", lambda: impl.eigvals_2x2_paired(g)),
            ("wrapped_angle_sum", lambda: impl.wrapped_angle_sum(z, True)),
        )
        for kernel_name, fn in cases:
            rows.append(
                {"kernel": kernel_name, "backend": name, "seconds": _best_of(fn, repeats)}
            )
    return rows
