"""Frequency-sweep identification of a 2x2 admittance from a black-box device.

The simulator collapses signal extraction into direct evaluation of the device
model: each planned frequency gets two linearly independent voltage
perturbations, the current responses are (optionally) corrupted with relative
complex Gaussian noise, and the admittance sample is recovered by inverting the
perturbation matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegeneratePerturbations, EmptyPlan, SingularMeasurement
from .models import (
    ComplexMat2,
    RationalMatrix2,
    check_self_stable,
    eval_rational_matrix,
    eval_rational_matrix_array,
    hz_to_rad,
)

#: disturbance amplitude as a fraction of the operating voltage
DEFAULT_DISTURBANCE = 0.05
DEFAULT_OPERATING_VOLTAGE = 1.0

_DEDUP_TOL_HZ = 1e-9


@dataclass(frozen=True)
class FrequencyPlan:
    """Sweep bands in Hz: tuples of (f_start, f_end, step).

    Bands must be strictly ordered and non-overlapping with positive steps.
    Realistic plans cover both negative and positive frequencies (the coupled
    model is not conjugate-symmetric); single-sided toy plans are allowed but
    flagged by the analysis layer.
    """

    bands: tuple[tuple[float, float, float], ...]
    f1_hz: float = 50.0

    def __post_init__(self):
        if not self.bands:
            raise ValueError("plan needs at least one band")
        norm = tuple((float(a), float(b), float(s)) for a, b, s in self.bands)
        prev_end = -math.inf
        for f_start, f_end, step in norm:
            if not (step > 0 and math.isfinite(step)):
                raise ValueError(f"band step must be > 0, got {step!r}")
            if not (f_start < f_end):
                raise ValueError(f"band must satisfy f_start < f_end, got ({f_start}, {f_end})")
            if f_start < prev_end - _DEDUP_TOL_HZ:
                raise ValueError("bands must be ordered and non-overlapping")
            prev_end = f_end
        if not (self.f1_hz > 0):
            raise ValueError("f1_hz must be > 0")
        object.__setattr__(self, "bands", norm)

    def spans_both_signs(self) -> bool:
        return self.bands[0][0] < 0.0 < self.bands[-1][1]


#: the default plan: +/-1000 Hz, dense 1 Hz inside +/-100 Hz, 5 Hz elsewhere
DEFAULT_PLAN = FrequencyPlan(
    bands=((-1000.0, -100.0, 5.0), (-100.0, 100.0, 1.0), (100.0, 1000.0, 5.0)),
    f1_hz=50.0,
)


def plan_frequencies_hz(plan: FrequencyPlan) -> np.ndarray:
    """The merged, deduplicated sweep grid in Hz (strictly increasing)."""
    grids = []
    for f_start, f_end, step in plan.bands:
        count = int(math.floor((f_end - f_start) / step + 1e-9)) + 1
        grids.append(f_start + step * np.arange(count))
    merged = np.sort(np.concatenate(grids))
    keep = np.ones(merged.shape, dtype=bool)
    keep[1:] = np.diff(merged) > _DEDUP_TOL_HZ
    merged = merged[keep]
    if merged.shape[0] < 2:
        raise EmptyPlan(f"plan {plan.bands!r} yields {merged.shape[0]} point(s)")
    return merged


def plan_frequencies(plan: FrequencyPlan) -> np.ndarray:
    """The sweep grid in rad/s."""
    return hz_to_rad(plan_frequencies_hz(plan))


@dataclass(frozen=True)
class MeasurementSet:
    """One perturb-and-measure experiment pair at a single frequency.

    Columns of ``u`` are the two perturbation voltage vectors (components at
    f_p and f_p - 2*f1); columns of ``i`` are the measured current responses.
    """

    f_p: float
    u: ComplexMat2
    i: ComplexMat2


@dataclass(frozen=True)
class FrequencyResponseTable:
    """Ordered admittance samples: the grey-box device model.

    The canonical frequency axis is ``f_hz``; ``omega`` is derived as
    2*pi*f_hz so serialization round-trips are bit-exact.
    """

    f_hz: np.ndarray
    y: np.ndarray
    noise_level: float = 0.0
    seed: int | None = None
    plan: FrequencyPlan | None = None
    device_id: str | None = None

    def __post_init__(self):
        f = np.ascontiguousarray(np.asarray(self.f_hz, dtype=float))
        y = np.ascontiguousarray(np.asarray(self.y, dtype=np.complex128))
        if f.ndim != 1 or y.shape != (f.shape[0], 2, 2):
            raise ValueError(f"shape mismatch: f {f.shape}, y {y.shape}")
        if f.shape[0] == 0:
            raise ValueError("empty table")
        if not np.all(np.isfinite(f)) or not np.all(np.isfinite(y)):
            raise ValueError("non-finite table data")
        if np.any(np.diff(f) <= 0):
            raise ValueError("frequencies must be strictly increasing without duplicates")
        f.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "f_hz", f)
        object.__setattr__(self, "y", y)

    @cached_property
    def omega(self) -> np.ndarray:
        w = hz_to_rad(self.f_hz)
        w.setflags(write=False)
        return w

    def __len__(self) -> int:
        return self.f_hz.shape[0]

    def entry(self, i: int) -> tuple[float, ComplexMat2]:
        return float(self.omega[i]), ComplexMat2.from_array(self.y[i])

    def truncated_to_diagonal(self) -> "FrequencyResponseTable":
        """Copy with off-diagonal admittance zeroed (misjudgment probe)."""
        y = self.y.copy()
        y[:, 0, 1] = 0.0
        y[:, 1, 0] = 0.0
        return FrequencyResponseTable(
            self.f_hz.copy(), y, self.noise_level, self.seed, self.plan,
            device_id=(self.device_id or "") + "/diagonal",
        )

    def subset(self, mask: np.ndarray) -> "FrequencyResponseTable":
        return FrequencyResponseTable(
            self.f_hz[mask], self.y[mask], self.noise_level, self.seed, self.plan, self.device_id
        )


def _default_perturbations(amplitude: float) -> np.ndarray:
    return np.array([[amplitude, 0.0], [0.0, amplitude]], dtype=np.complex128)


def perturb_and_measure(
    device: RationalMatrix2,
    f_p: float,
    f1: float,
    perturbations: np.ndarray | None = None,
    noise: float = 0.0,
    rng: np.random.Generator | None = None,
) -> MeasurementSet:
    """Apply two perturbation vectors at f_p and record the current responses.

    ``perturbations`` holds the two voltage vectors as columns; the default is
    the scaled unit-vector pair.  Noise, when positive, is complex Gaussian per
    measured component with standard deviation ``noise * |i|`` split evenly
    between the real and imaginary parts.
    """
    if noise < 0:
        raise ValueError("noise must be >= 0")
    if perturbations is None:
        u = _default_perturbations(DEFAULT_DISTURBANCE * DEFAULT_OPERATING_VOLTAGE)
    else:
        u = np.asarray(perturbations, dtype=np.complex128).copy()
        if u.shape != (2, 2):
            raise ValueError("perturbations must be a 2x2 column matrix")
    if np.linalg.cond(u) > 1e12:
        raise DegeneratePerturbations(f"perturbation vectors are parallel at f_p={f_p} Hz")
    y_true = eval_rational_matrix(device, hz_to_rad(f_p)).as_array()
    i_mat = y_true @ u
    if noise > 0.0:
        rng = rng if rng is not None else np.random.default_rng()
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        i_mat = i_mat + noise * np.abs(i_mat) * g
    return MeasurementSet(f_p=float(f_p), u=ComplexMat2.from_array(u), i=ComplexMat2.from_array(i_mat))


def estimate_admittance(m: MeasurementSet) -> ComplexMat2:
    """Recover the admittance sample: Y = i-matrix . inverse(u-matrix)."""
    u = m.u.as_array()
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    norm2 = float(np.sum(np.abs(u) ** 2))
    if abs(det) < 1e-12 * norm2 or norm2 == 0.0:
        raise SingularMeasurement(f"perturbation matrix singular at f_p={m.f_p} Hz")
    u_inv = np.array([[u[1, 1], -u[0, 1]], [-u[1, 0], u[0, 0]]], dtype=np.complex128) / det
    return ComplexMat2.from_array(m.i.as_array() @ u_inv)


def sweep(
    device: RationalMatrix2,
    plan: FrequencyPlan,
    noise: float = 0.0,
    seed: int = 0,
    amplitude: float = DEFAULT_DISTURBANCE * DEFAULT_OPERATING_VOLTAGE,
    device_id: str | None = None,
) -> FrequencyResponseTable:
    """Sweep the whole plan with the default perturbation pair (vectorized).

    Deterministic for a given seed.  Output frequencies are exactly the
    planned grid; evaluation failures abort with the offending frequency.
    """
    report = check_self_stable(device)
    if not report.stable:
        raise ValueError(
            f"device is not self-stable (offending roots {report.offending_roots!r}); "
            "the sweep protocol presumes a stand-alone stable device"
        )
    f = plan_frequencies_hz(plan)
    y_true = eval_rational_matrix_array(device, hz_to_rad(f))
    u = _default_perturbations(amplitude)
    u_inv = np.array(
        [[u[1, 1], -u[0, 1]], [-u[1, 0], u[0, 0]]], dtype=np.complex128
    ) / (u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0])
    i_all = y_true @ u
    if noise > 0.0:
        rng = np.random.default_rng(seed)
        g = rng.standard_normal(i_all.shape) + 1j * rng.standard_normal(i_all.shape)
        i_all = i_all + noise * np.abs(i_all) * g
    y_meas = i_all @ u_inv
    return FrequencyResponseTable(
        f_hz=f, y=y_meas, noise_level=float(noise), seed=int(seed), plan=plan, device_id=device_id
    )


def table_from_model(
    device: RationalMatrix2, plan: FrequencyPlan, device_id: str | None = None
) -> FrequencyResponseTable:
    """Exact (noise-free, excitation-free) tabulation of a closed-form device."""
    f = plan_frequencies_hz(plan)
    y = eval_rational_matrix_array(device, hz_to_rad(f))
    return FrequencyResponseTable(f_hz=f, y=y, plan=plan, device_id=device_id)
