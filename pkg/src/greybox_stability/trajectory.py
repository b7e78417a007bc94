"""Determinant trajectory of the return difference matrix and its axis crossings.

The trajectory D(j*omega) = det(I + Z_grid * Y_device) is the single object all
stability logic reads.  Crossings of the coordinate axes are detected on the
discrete samples by sign products, located by linear interpolation, and
classified into the four half-axis types by the sign of the other coordinate.

Phase is never measured or unwrapped here: for black-box data only the real
and imaginary parts are trustworthy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import IntEnum
from functools import cached_property

import numpy as np

from . import kernels
from .errors import (
    IllConditionedFit,
    InsufficientSamples,
    SingularInversion,
)
from .models import TWO_PI, GridParams, grid_impedance_array
from .sweep import FrequencyResponseTable

ADMITTANCE_FORM = "admittance-form"
IMPEDANCE_FORM = "impedance-form"

#: |D| relative floor under which a crossing counts as passing the origin
ORIGIN_TOL_FACTOR = 1e-9

#: relative endpoint disagreement beyond which the sweep looks unsettled
BOUNDARY_SETTLEMENT_TOL = 0.05

PIECEWISE_LINEAR = "piecewise-linear"
CUBIC_FIT = "cubic-polynomial-fit"
LAGRANGE = "lagrange"
INTERP_METHODS = (PIECEWISE_LINEAR, CUBIC_FIT, LAGRANGE)


class CrossingKind(IntEnum):
    """Half-axis intersection types, in clockwise traversal order."""

    POS_REAL = 1
    NEG_IMAG = 2
    NEG_REAL = 3
    POS_IMAG = 4

    @property
    def axis(self) -> str:
        return "real" if self in (CrossingKind.POS_REAL, CrossingKind.NEG_REAL) else "imag"


@dataclass(frozen=True)
class DeterminantTrajectory:
    """Sampled determinant of the return difference matrix along j*omega."""

    omega: np.ndarray
    re: np.ndarray
    im: np.ndarray
    form: str = ADMITTANCE_FORM

    def __post_init__(self):
        om = np.ascontiguousarray(np.asarray(self.omega, dtype=float))
        re = np.ascontiguousarray(np.asarray(self.re, dtype=float))
        im = np.ascontiguousarray(np.asarray(self.im, dtype=float))
        if not (om.shape == re.shape == im.shape) or om.ndim != 1:
            raise ValueError("omega/re/im must be 1-d arrays of equal length")
        if om.shape[0] < 1:
            raise ValueError("empty trajectory")
        if np.any(np.diff(om) <= 0):
            raise ValueError("omega must be strictly increasing")
        if not (np.all(np.isfinite(om)) and np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
            raise ValueError("non-finite trajectory data")
        for arr, name in ((om, "omega"), (re, "re"), (im, "im")):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return self.omega.shape[0]

    def values(self) -> np.ndarray:
        return self.re + 1j * self.im

    @cached_property
    def max_magnitude(self) -> float:
        return float(np.max(np.hypot(self.re, self.im)))

    def boundary_settlement_gap(self) -> float:
        """Relative disagreement of the two sweep endpoints.

        Both ends of a settled trajectory approach the same asymptotic value,
        so a large gap warns that the sweep range truncates the closed curve.
        """
        d0 = complex(self.re[0], self.im[0])
        d1 = complex(self.re[-1], self.im[-1])
        scale = max(abs(d0), abs(d1), 1e-300)
        return abs(d0 - d1) / scale

    def window_indices(self, omega_lo: float, omega_hi: float) -> np.ndarray:
        return np.flatnonzero((self.omega >= omega_lo) & (self.omega <= omega_hi))


@dataclass(frozen=True)
class Crossing:
    """One axis intersection of the discrete trajectory.

    ``index`` is the left sample of the bracketing interval; ``omega_cross``
    and ``on_axis_value`` (the nonzero coordinate) come from linear
    interpolation of the crossing coordinate.
    """

    index: int
    omega_cross: float
    kind: CrossingKind
    on_axis_value: float
    origin_pass: bool = False
    ambiguous: bool = False
    low_resolution: bool = False

    @property
    def axis(self) -> str:
        return self.kind.axis


def return_difference_determinant(
    grid: GridParams, table: FrequencyResponseTable
) -> DeterminantTrajectory:
    """D = (1+G11)(1+G22) - G12*G21 with G = Z_grid * Y, per table frequency.

    Propagates SingularFrequency if the table contains a grid pole; callers
    that may feed capacitor grids should pre-filter with grid_singular_mask.
    """
    if len(table) == 0:
        raise ValueError("empty response table")
    z = grid_impedance_array(table.omega, grid)
    g = z @ table.y
    d = kernels.det_return_difference(np.ascontiguousarray(g))
    return DeterminantTrajectory(table.omega, d.real, d.imag, form=ADMITTANCE_FORM)


def return_ratio_array(grid: GridParams, table: FrequencyResponseTable) -> np.ndarray:
    """G = Z_grid * Y as an (n, 2, 2) stack (shared by the eigen-loci checks)."""
    return grid_impedance_array(table.omega, grid) @ table.y


def _invert_stack(mats: np.ndarray, floor_rel: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form 2x2 inverses; returns (inverses, dropped-mask)."""
    det = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    norm2 = np.sum(np.abs(mats) ** 2, axis=(1, 2))
    bad = np.abs(det) < floor_rel * np.maximum(norm2, 1e-300)
    safe_det = np.where(bad, 1.0, det)
    inv = np.empty_like(mats)
    inv[:, 0, 0] = mats[:, 1, 1] / safe_det
    inv[:, 0, 1] = -mats[:, 0, 1] / safe_det
    inv[:, 1, 0] = -mats[:, 1, 0] / safe_det
    inv[:, 1, 1] = mats[:, 0, 0] / safe_det
    return inv, bad


def determinant_impedance_form(
    grid: GridParams, table: FrequencyResponseTable
) -> tuple[DeterminantTrajectory, np.ndarray]:
    """D = det(I + Z_device * Y_grid) from the same admittance table.

    Frequencies where the device admittance (or the grid impedance) cannot be
    inverted are dropped and returned as the second element; the whole sweep
    being singular raises SingularInversion.
    """
    z_grid = grid_impedance_array(table.omega, grid)
    z_dev, bad_dev = _invert_stack(table.y)
    y_grid, bad_grid = _invert_stack(z_grid)
    bad = bad_dev | bad_grid
    if bad.all():
        raise SingularInversion("device/grid inversion failed at every sweep frequency")
    keep = ~bad
    g = z_dev[keep] @ y_grid[keep]
    d = kernels.det_return_difference(np.ascontiguousarray(g))
    traj = DeterminantTrajectory(table.omega[keep], d.real, d.imag, form=IMPEDANCE_FORM)
    return traj, table.omega[bad]


def _classify(axis: str, other: float) -> CrossingKind:
    if axis == "real":
        return CrossingKind.POS_REAL if other >= 0.0 else CrossingKind.NEG_REAL
    return CrossingKind.POS_IMAG if other >= 0.0 else CrossingKind.NEG_IMAG


def detect_crossings(
    t: DeterminantTrajectory, origin_tol_factor: float = ORIGIN_TOL_FACTOR
) -> list[Crossing]:
    """Scan consecutive sample pairs for axis crossings (sign products <= 0).

    A sample sitting exactly on an axis is attributed to the interval on its
    left so it is counted once.  Intervals where both coordinates change sign
    are flagged ambiguous; when the two interpolated crossings also fall in
    the same tenth of the interval they are additionally flagged
    low-resolution (a 10x piecewise-linear rescan cannot order them).
    """
    if len(t) < 2:
        raise ValueError("need at least 2 samples to detect crossings")
    om, re, im = t.omega, t.re, t.im
    scale = t.max_magnitude
    origin_tol = origin_tol_factor * (scale if scale > 0.0 else 1.0)
    per_interval: dict[int, list[Crossing]] = {}
    for coord, other_coord, axis in ((im, re, "real"), (re, im, "imag")):
        # sign-based test: products of tiny same-sign values underflow to 0.0
        signs = np.sign(coord)
        for i in np.flatnonzero(signs[:-1] * signs[1:] <= 0.0):
            i = int(i)
            c0 = float(coord[i])
            c1 = float(coord[i + 1])
            if c0 == 0.0 and c1 == 0.0:
                continue  # degenerate on-axis run, no isolated crossing
            if c0 == 0.0 and i > 0:
                continue  # counted by the interval to the left
            frac = 0.0 if c0 == 0.0 else min(max(c0 / (c0 - c1), 0.0), 1.0)
            omega_cross = float(om[i] + frac * (om[i + 1] - om[i]))
            other = float(other_coord[i] + frac * (other_coord[i + 1] - other_coord[i]))
            crossing = Crossing(
                index=i,
                omega_cross=omega_cross,
                kind=_classify(axis, other),
                on_axis_value=other,
                origin_pass=abs(other) < origin_tol,
            )
            per_interval.setdefault(i, []).append(crossing)
    out: list[Crossing] = []
    for i, found in per_interval.items():
        if len(found) > 1:
            width = float(t.omega[i + 1] - t.omega[i])
            cells = {
                min(int((c.omega_cross - float(t.omega[i])) / width * 10.0), 9) for c in found
            }
            low_res = len(cells) < len(found)
            found = [replace(c, ambiguous=True, low_resolution=low_res) for c in found]
        out.extend(found)
    out.sort(key=lambda c: (c.omega_cross, int(c.kind)))
    return out


def _lagrange_refine(x_nodes, y_nodes, x_eval):
    # barycentric form; nodes are distinct because omega is strictly increasing
    x_nodes = np.asarray(x_nodes, dtype=float)
    w = np.ones_like(x_nodes)
    for j in range(x_nodes.shape[0]):
        diff = x_nodes[j] - np.delete(x_nodes, j)
        w[j] = 1.0 / np.prod(diff)
    out = np.empty_like(np.asarray(x_eval, dtype=float))
    for k, x in enumerate(np.asarray(x_eval, dtype=float)):
        delta = x - x_nodes
        hit = np.flatnonzero(np.abs(delta) < 1e-300)
        if hit.size:
            out[k] = y_nodes[hit[0]]
            continue
        terms = w / delta
        out[k] = float(np.sum(terms * y_nodes) / np.sum(terms))
    return out


def _cubic_fit_refine(x_nodes, y_nodes, x_eval):
    mid = 0.5 * (x_nodes[0] + x_nodes[-1])
    half = max(0.5 * (x_nodes[-1] - x_nodes[0]), 1e-300)
    t = (x_nodes - mid) / half
    v = np.vander(t, 4, increasing=True)
    normal = v.T @ v
    cond = np.linalg.cond(normal)
    if not np.isfinite(cond) or cond > 1e12:
        raise IllConditionedFit(f"cubic fit normal system condition {cond:.3g}")
    coeffs, *_ = np.linalg.lstsq(v, y_nodes, rcond=None)
    te = (np.asarray(x_eval, dtype=float) - mid) / half
    return np.vander(te, 4, increasing=True) @ coeffs


def interpolate(
    t: DeterminantTrajectory,
    method: str = PIECEWISE_LINEAR,
    *,
    step: float,
    window: tuple[float, float] | None = None,
) -> DeterminantTrajectory:
    """Refine re and im independently on a regular grid of spacing ``step``.

    piecewise-linear connects adjacent samples; cubic-polynomial-fit is one
    least-squares cubic over the window; lagrange passes through every window
    sample.  The window must lie inside the sampled range.
    """
    if method not in INTERP_METHODS:
        raise ValueError(f"unknown interpolation method {method!r}")
    if not (step > 0):
        raise ValueError("step must be > 0")
    lo = float(t.omega[0]) if window is None else float(window[0])
    hi = float(t.omega[-1]) if window is None else float(window[1])
    if lo < t.omega[0] - 1e-12 or hi > t.omega[-1] + 1e-12 or lo >= hi:
        raise ValueError(f"window ({lo}, {hi}) outside sampled range")
    lo = max(lo, float(t.omega[0]))
    hi = min(hi, float(t.omega[-1]))
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    grid = lo + step * np.arange(count)
    if grid[-1] < hi - 1e-9 * max(1.0, abs(hi)):
        grid = np.append(grid, hi)
    if method == PIECEWISE_LINEAR:
        re = np.interp(grid, t.omega, t.re)
        im = np.interp(grid, t.omega, t.im)
    else:
        idx = t.window_indices(lo, hi)
        if idx.size < 4:
            raise InsufficientSamples(
                f"{method} needs >= 4 samples in window, found {idx.size}"
            )
        xs = t.omega[idx]
        if method == CUBIC_FIT:
            re = _cubic_fit_refine(xs, t.re[idx], grid)
            im = _cubic_fit_refine(xs, t.im[idx], grid)
        else:
            re = _lagrange_refine(xs, t.re[idx], grid)
            im = _lagrange_refine(xs, t.im[idx], grid)
    return DeterminantTrajectory(grid, re, im, form=t.form)


def splice_refinement(
    t: DeterminantTrajectory, omega_lo: float, omega_hi: float, factor: int = 10
) -> DeterminantTrajectory:
    """Replace one omega interval with a piecewise-linear grid `factor`x denser."""
    lo = max(float(omega_lo), float(t.omega[0]))
    hi = min(float(omega_hi), float(t.omega[-1]))
    if lo >= hi:
        return t
    inside = (t.omega > lo) & (t.omega < hi)
    local_step = (hi - lo) / max(1, int(np.count_nonzero(inside)) + 1) / factor
    dense = np.linspace(lo, hi, max(2, int(round((hi - lo) / local_step)) + 1))
    re_d = np.interp(dense, t.omega, t.re)
    im_d = np.interp(dense, t.omega, t.im)
    before = t.omega < lo
    after = t.omega > hi
    om = np.concatenate([t.omega[before], dense, t.omega[after]])
    re = np.concatenate([t.re[before], re_d, t.re[after]])
    im = np.concatenate([t.im[before], im_d, t.im[after]])
    keep = np.ones(om.shape, dtype=bool)
    keep[1:] = np.diff(om) > 0
    return DeterminantTrajectory(om[keep], re[keep], im[keep], form=t.form)
