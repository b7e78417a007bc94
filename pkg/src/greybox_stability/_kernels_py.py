"""Pure numpy implementations of the per-frequency inner loops.

Mirrors the API of the compiled extension `_kernels_cy`; whichever is imported
by `kernels` must produce identical results (this is enforced by the backend
parity tests).
"""

from __future__ import annotations

import numpy as np


def polyval_many(coeffs: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Horner evaluation of an ascending-coefficient polynomial over `s`."""
    out = np.zeros(s.shape[0], dtype=np.complex128)
    for c in coeffs[::-1]:
        out *= s
        out += c
    return out


def det_return_difference(g: np.ndarray) -> np.ndarray:
    """det(I + G) for a stack of 2x2 return-ratio samples, expanded directly."""
    return (1.0 + g[:, 0, 0]) * (1.0 + g[:, 1, 1]) - g[:, 0, 1] * g[:, 1, 0]


def eigvals_2x2_paired(g: np.ndarray) -> np.ndarray:
    """Eigenvalues of stacked 2x2 matrices, continuity-paired across the stack.

    The quadratic formula is vectorized; pairing is a sequential scan choosing,
    at each step, the 2-permutation minimizing total displacement from the
    previous pair.
    """
    tr = g[:, 0, 0] + g[:, 1, 1]
    det = g[:, 0, 0] * g[:, 1, 1] - g[:, 0, 1] * g[:, 1, 0]
    disc = np.sqrt(tr * tr - 4.0 * det)
    lam_a = 0.5 * (tr + disc)
    lam_b = 0.5 * (tr - disc)
    out = np.empty((g.shape[0], 2), dtype=np.complex128)
    out[0, 0] = lam_a[0]
    out[0, 1] = lam_b[0]
    for i in range(1, g.shape[0]):
        keep = abs(lam_a[i] - out[i - 1, 0]) + abs(lam_b[i] - out[i - 1, 1])
        swap = abs(lam_b[i] - out[i - 1, 0]) + abs(lam_a[i] - out[i - 1, 1])
        if swap < keep:
            out[i, 0] = lam_b[i]
            out[i, 1] = lam_a[i]
        else:
            out[i, 0] = lam_a[i]
            out[i, 1] = lam_b[i]
    return out


def wrapped_angle_sum(z: np.ndarray, close: bool = True) -> tuple[float, float]:
    """Accumulated wrapped angle increments along a complex path.

    Returns ``(total_angle, max_abs_step)``.  With ``close=True`` the increment
    from the last point back to the first is included, so the total is an
    integer multiple of 2*pi for any path that never touches the origin.
    """
    if z.shape[0] < 2:
        return 0.0, 0.0
    steps = np.angle(z[1:] * np.conjugate(z[:-1]))
    total = float(np.sum(steps))
    max_step = float(np.max(np.abs(steps))) if steps.size else 0.0
    if close:
        closing = float(np.angle(z[0] * np.conjugate(z[-1])))
        total += closing
        max_step = max(max_step, abs(closing))
    return total, max_step
