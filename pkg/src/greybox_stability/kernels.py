"""Kernel backend selection: compiled extension when available, numpy otherwise.

The hot per-frequency loops (polynomial grid evaluation, return-difference
determinants, eigenvalue pairing, winding accumulation) exist twice: as a
Cython extension (`_kernels_cy`) and as a pure numpy module (`_kernels_py`).
The compiled version is preferred at import time; set the environment variable
``GREYBOX_STABILITY_KERNELS=python`` (or ``cython``) to force a backend.

``benchmarks/bench_backends.py`` and the ``bench`` CLI subcommand compare the
two on identical inputs.
"""

from __future__ import annotations

import os

from . import _kernels_py

_FORCE = os.environ.get("GREYBOX_STABILITY_KERNELS", "auto").strip().lower()

if _FORCE in ("python", "py", "pure"):
    _impl = _kernels_py
    BACKEND = "python"
elif _FORCE in ("cython", "cy", "compiled"):
    from . import _kernels_cy as _impl  # type: ignore[attr-defined]

    BACKEND = "cython"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

polyval_many = _impl.polyval_many
det_return_difference = _impl.det_return_difference
eigvals_2x2_paired = _impl.eigvals_2x2_paired
wrapped_angle_sum = _impl.wrapped_angle_sum


def available_backends() -> tuple[str, ...]:
    names = ["python"]
    try:
        from . import _kernels_cy  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    return tuple(names)


def load_backend(name: str):
    """Return the backend module by name ("python" or "cython")."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels_cy

        return _kernels_cy
    raise ValueError(f"unknown kernel backend {name!r}")
