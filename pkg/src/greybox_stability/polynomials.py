"""Dense complex polynomials in ascending-power coefficient form.

Coefficients may be complex: the frequency-coupled grid model shifts one
diagonal channel by -2j*omega1, which breaks conjugate symmetry, so nothing
here may assume real coefficients or paired roots.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import RootFindingFailure

Coeffs = tuple[complex, ...]


def trim(coeffs) -> Coeffs:
    """Drop exact-zero high-order terms; the zero polynomial trims to (0j,)."""
    c = [complex(v) for v in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    if not c:
        c = [0j]
    return tuple(c)


def is_zero(coeffs) -> bool:
    return all(complex(v) == 0 for v in coeffs)


def degree(coeffs) -> int:
    """Degree after trimming; the zero polynomial reports degree 0."""
    return len(trim(coeffs)) - 1


def add(a, b) -> Coeffs:
    n = max(len(a), len(b))
    out = [0j] * n
    for i, v in enumerate(a):
        out[i] += complex(v)
    for i, v in enumerate(b):
        out[i] += complex(v)
    return trim(out)


def scale(a, k) -> Coeffs:
    return trim([complex(v) * complex(k) for v in a])


def mul(a, b) -> Coeffs:
    if is_zero(a) or is_zero(b):
        return (0j,)
    pa = np.asarray(trim(a), dtype=complex)
    pb = np.asarray(trim(b), dtype=complex)
    return tuple(np.convolve(pa, pb))


def from_roots(roots, leading: complex = 1.0) -> Coeffs:
    out: Coeffs = (complex(leading),)
    for r in roots:
        out = mul(out, (-complex(r), 1.0))
    return out


def derivative(a) -> Coeffs:
    c = trim(a)
    if len(c) == 1:
        return (0j,)
    return trim([k * c[k] for k in range(1, len(c))])


def polyval(coeffs, s: complex) -> complex:
    acc = 0j
    for c in reversed(tuple(coeffs)):
        acc = acc * s + complex(c)
    return acc


def polyval_many(coeffs, s: np.ndarray) -> np.ndarray:
    """Horner evaluation over an array of points (compiled kernel when available)."""
    c = np.asarray(trim(coeffs), dtype=np.complex128)
    svals = np.ascontiguousarray(s, dtype=np.complex128)
    return kernels.polyval_many(c, svals)


def roots(coeffs) -> np.ndarray:
    """All roots via the companion-matrix eigensolve; empty for degree 0."""
    c = trim(coeffs)
    if len(c) == 1:
        return np.empty(0, dtype=complex)
    try:
        # np.roots expects descending order.
        return np.roots(np.asarray(c[::-1], dtype=complex))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy rarely fails here
        raise RootFindingFailure(str(exc)) from exc
