"""Critical-pole estimation from local slopes of the determinant trajectory.

Near an isolated zero z_o the determinant behaves as D(s) = (s - z_o)*(a + jb),
so along s = j*omega the real and imaginary parts are affine in omega with
slopes -b and a.  Measuring those slopes and one trajectory value close to the
zero recovers z_o itself:

    z_o = j*omega - D(j*omega) / (a + jb)

which is exact for the local model at any nearby frequency, not only at an
exact imaginary-part zero crossing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FlatSlope, NoCandidate
from .models import TWO_PI
from .trajectory import (
    PIECEWISE_LINEAR,
    Crossing,
    DeterminantTrajectory,
    detect_crossings,
    interpolate,
)

DEFAULT_REFINE_STEP_HZ = 0.1

#: a^2 + b^2 below this makes the local model degenerate
FLAT_SLOPE_TOL = 1e-18


@dataclass(frozen=True)
class CriticalPoleEstimate:
    """Estimated dominant zero of the determinant (= system critical pole)."""

    sigma_o: float
    omega_o: float
    a: float
    b: float
    omega_star: float
    method: str = PIECEWISE_LINEAR
    refine_step_hz: float = DEFAULT_REFINE_STEP_HZ
    window: tuple[float, float] | None = None

    @property
    def zero(self) -> complex:
        return complex(self.sigma_o, self.omega_o)

    @property
    def tau(self) -> float:
        """Time constant 1/|sigma_o|; infinity when the pole sits on the axis."""
        return math.inf if abs(self.sigma_o) < 1e-12 else 1.0 / abs(self.sigma_o)

    @property
    def omega_o_hz(self) -> float:
        return self.omega_o / TWO_PI

    @property
    def unstable(self) -> bool:
        return self.sigma_o > 0.0


def find_candidate_frequency(
    t: DeterminantTrajectory, crossings: list[Crossing] | None = None
) -> float:
    """The imaginary-part zero crossing with the smallest |D| (interpolated).

    Raises NoCandidate when Im[D] never crosses zero, which callers treat as
    "no critical zero": qualitative analysis only.
    """
    if crossings is None:
        crossings = detect_crossings(t)
    real_axis = [c for c in crossings if c.axis == "real"]
    if not real_axis:
        raise NoCandidate("imaginary part of the trajectory never crosses zero")
    # Im is exactly zero at the interpolated crossing, so the 2-norm of
    # (Re, Im) there reduces to |on_axis_value|.
    best = min(real_axis, key=lambda c: abs(c.on_axis_value))
    return float(best.omega_cross)


def _refined_window(
    t: DeterminantTrajectory,
    omega_star: float,
    method: str,
    step_hz: float,
    window: tuple[float, float] | None,
) -> tuple[DeterminantTrajectory, tuple[float, float]]:
    if window is None:
        idx = int(np.searchsorted(t.omega, omega_star))
        idx = min(max(idx, 1), len(t) - 1)
        h = float(t.omega[idx] - t.omega[idx - 1])
        window = (omega_star - 2.0 * h, omega_star + 2.0 * h)
    lo = max(float(window[0]), float(t.omega[0]))
    hi = min(float(window[1]), float(t.omega[-1]))
    refined = interpolate(t, method, step=step_hz * TWO_PI, window=(lo, hi))
    return refined, (lo, hi)


def local_slope(
    t: DeterminantTrajectory,
    omega_star: float,
    window: tuple[float, float] | None = None,
    method: str = PIECEWISE_LINEAR,
    step_hz: float = DEFAULT_REFINE_STEP_HZ,
) -> tuple[float, float]:
    """Slopes (a, b) = (dIm/domega, -dRe/domega) across omega_star.

    The trajectory is refined on a 0.1 Hz grid (piecewise-linear by default)
    and the central refined pair bracketing omega_star supplies the finite
    differences.
    """
    refined, _ = _refined_window(t, omega_star, method, step_hz, window)
    if len(refined) < 2:
        raise FlatSlope("refinement window too small for a slope estimate")
    k = int(np.searchsorted(refined.omega, omega_star))
    k = min(max(k, 1), len(refined) - 1)
    d_omega = float(refined.omega[k] - refined.omega[k - 1])
    a = float(refined.im[k] - refined.im[k - 1]) / d_omega
    b = -float(refined.re[k] - refined.re[k - 1]) / d_omega
    if a * a + b * b < FLAT_SLOPE_TOL:
        raise FlatSlope(f"local model degenerate at omega={omega_star:.6g} rad/s")
    return a, b


def estimate_critical_pole(
    t: DeterminantTrajectory,
    omega_star: float,
    slopes: tuple[float, float] | None = None,
    method: str = PIECEWISE_LINEAR,
    step_hz: float = DEFAULT_REFINE_STEP_HZ,
    window: tuple[float, float] | None = None,
) -> CriticalPoleEstimate:
    """Recover the critical zero from the trajectory value and local slopes."""
    refined, used_window = _refined_window(t, omega_star, method, step_hz, window)
    if slopes is None:
        a, b = local_slope(t, omega_star, window=window, method=method, step_hz=step_hz)
    else:
        a, b = float(slopes[0]), float(slopes[1])
        if a * a + b * b < FLAT_SLOPE_TOL:
            raise FlatSlope("provided slopes are degenerate")
    re0 = float(np.interp(omega_star, refined.omega, refined.re))
    im0 = float(np.interp(omega_star, refined.omega, refined.im))
    z = 1j * omega_star - complex(re0, im0) / complex(a, b)
    return CriticalPoleEstimate(
        sigma_o=float(z.real),
        omega_o=float(z.imag),
        a=a,
        b=b,
        omega_star=float(omega_star),
        method=method,
        refine_step_hz=step_hz,
        window=used_window,
    )


def critical_pole_from_crossing(
    re_d: float, a: float, b: float, omega_star: float = 0.0
) -> CriticalPoleEstimate:
    """Closed-form estimate at an exact imaginary-part zero crossing.

    sigma_o = -Re[D]*a / (a^2 + b^2); the resonance correction is written in
    the division-free form omega_o = omega + Re[D]*b / (a^2 + b^2), which
    equals omega - sigma_o*b/a whenever a != 0.
    """
    norm2 = a * a + b * b
    if norm2 < FLAT_SLOPE_TOL:
        raise FlatSlope("slopes (a, b) are degenerate")
    sigma = -re_d * a / norm2
    omega_o = omega_star + re_d * b / norm2
    return CriticalPoleEstimate(
        sigma_o=float(sigma), omega_o=float(omega_o), a=float(a), b=float(b),
        omega_star=float(omega_star), method="exact-crossing",
    )


def estimate_from_trajectory(
    t: DeterminantTrajectory,
    method: str = PIECEWISE_LINEAR,
    step_hz: float = DEFAULT_REFINE_STEP_HZ,
    crossings: list[Crossing] | None = None,
) -> CriticalPoleEstimate:
    """Candidate search + slope extraction + pole estimate in one call."""
    omega_star = find_candidate_frequency(t, crossings)
    return estimate_critical_pole(t, omega_star, method=method, step_hz=step_hz)


def naive_estimate(t: DeterminantTrajectory) -> CriticalPoleEstimate:
    """Reference estimator with no sub-sample refinement at all.

    Works directly on the discrete points: the candidate frequency snaps to
    the raw sample with the smallest |D| adjacent to an imaginary-part sign
    change, the trajectory value is that sample's, and the slopes come from
    the secant of the sign-change interval.  Exists to quantify what the
    interpolation step buys.
    """
    im = t.im
    signs = np.sign(im)
    sign_change = np.flatnonzero(signs[:-1] * signs[1:] <= 0.0)
    if sign_change.size == 0:
        raise NoCandidate("imaginary part never changes sign")
    candidates = []
    for i in sign_change:
        i = int(i)
        for k in (i, i + 1):
            candidates.append((abs(complex(t.re[k], t.im[k])), k, i))
    _, k, i = min(candidates)
    d_omega = float(t.omega[i + 1] - t.omega[i])
    a = float(t.im[i + 1] - t.im[i]) / d_omega
    b = -float(t.re[i + 1] - t.re[i]) / d_omega
    if a * a + b * b < FLAT_SLOPE_TOL:
        raise FlatSlope("degenerate raw slopes")
    omega_star = float(t.omega[k])
    z = 1j * omega_star - complex(float(t.re[k]), float(t.im[k])) / complex(a, b)
    return CriticalPoleEstimate(
        sigma_o=float(z.real), omega_o=float(z.imag), a=a, b=b,
        omega_star=omega_star, method="nearest-sample",
    )
