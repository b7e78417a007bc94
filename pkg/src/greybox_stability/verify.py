"""Independent cross-checks for the trajectory-based verdict.

Three referees, none of which share code with the main pipeline's decision
path: a generalized Nyquist criterion over continuity-paired eigenvalue loci,
an exact right-half-plane zero count obtained by symbolic composition of the
closed-form system, and an admittance-form vs impedance-form agreement check.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from . import polynomials as poly
from .errors import (
    ConsistencyViolation,
    DegenerateNumerator,
    PassThroughCriticalPoint,
)
from .idta import StabilityVerdict, assess, build_idta
from .models import (
    GridParams,
    RationalMatrix2,
    grid_impedance_rational,
)
from .sweep import FrequencyPlan, FrequencyResponseTable, table_from_model
from .trajectory import (
    DeterminantTrajectory,
    detect_crossings,
    determinant_impedance_form,
    return_difference_determinant,
    return_ratio_array,
)

TWO_PI = 2.0 * np.pi

#: |lambda - critical point| below this aborts the winding count
CRITICAL_POINT_TOL = 1e-9

#: nominal complex flops per frequency point (from the closed-form expressions)
DET_FLOPS_PER_POINT = 18
EIG_FLOPS_PER_POINT = 62


@dataclass(frozen=True)
class EigenLoci:
    """Two continuity-paired eigenvalue traces of the return-ratio matrix."""

    omega: np.ndarray
    lam1: np.ndarray
    lam2: np.ndarray

    def __post_init__(self):
        if not (self.omega.shape == self.lam1.shape == self.lam2.shape):
            raise ValueError("omega/lam1/lam2 must share a shape")


def eigen_loci(g: np.ndarray, omega: np.ndarray) -> EigenLoci:
    """Eigenvalues of each 2x2 sample, paired across frequencies.

    Pairing picks, per step, whichever of the two orderings moves the pair
    least; this prevents braiding artifacts that corrupt the winding count.
    """
    g = np.ascontiguousarray(np.asarray(g, dtype=np.complex128))
    lam = kernels.eigvals_2x2_paired(g)
    return EigenLoci(np.asarray(omega, dtype=float), lam[:, 0].copy(), lam[:, 1].copy())


def gnc_verdict(loci: EigenLoci, critical_point: complex = -1.0 + 0.0j) -> StabilityVerdict:
    """Net clockwise winding of both loci around the critical point.

    Angle increments are accumulated continuously along each trace and each
    trace is closed from its last sample back to its first; the total must be
    an integer number of turns up to floating-point noise.
    """
    if loci.omega.shape[0] == 0:
        raise ValueError("empty loci")
    total = 0.0
    max_step = 0.0
    for trace in (loci.lam1, loci.lam2):
        z = np.ascontiguousarray(trace - critical_point)
        dist = np.abs(z)
        if float(np.min(dist)) < CRITICAL_POINT_TOL:
            raise PassThroughCriticalPoint(
                f"locus passes through {critical_point} at omega="
                f"{float(loci.omega[int(np.argmin(dist))]):.6g} rad/s"
            )
        part, step = kernels.wrapped_angle_sum(z, True)
        total += part
        max_step = max(max_step, step)
    turns = total / TWO_PI
    winding = int(round(-turns))  # clockwise positive, to match the trajectory convention
    diagnostics = []
    if abs(turns - round(turns)) > 0.05:
        diagnostics.append("non-integer-winding")
    if max_step > 0.9 * np.pi:
        diagnostics.append("undersampled-locus")
    return StabilityVerdict(
        stable=(winding == 0), winding=winding,
        first_coordinate=None, last_coordinate=None, diagnostics=tuple(diagnostics),
    )


@dataclass(frozen=True)
class OracleReport:
    """Ground truth for a closed-form system: zeros of the composed determinant."""

    rhp_zero_count: int
    zeros: tuple[complex, ...]
    numerator_degree: int
    diagnostics: tuple[str, ...] = ()
    all_zeros: tuple[complex, ...] = ()
    critical_zero: complex | None = None
    critical_slope: complex | None = None


def composed_determinant_polys(
    device: RationalMatrix2, grid: GridParams
) -> tuple[tuple[complex, ...], tuple[complex, ...]]:
    """Numerator and denominator of det(I + Z_grid * Y) by exact convolution.

    No floating division happens until callers solve for roots; the common
    denominator is the product of all entry denominators.
    """
    (p1, q1), (p2, q2) = grid_impedance_rational(grid)
    a11, b11 = device.e11.num, device.e11.den
    a12, b12 = device.e12.num, device.e12.den
    a21, b21 = device.e21.num, device.e21.den
    a22, b22 = device.e22.num, device.e22.den
    f1_num = poly.add(poly.mul(b11, q1), poly.mul(p1, a11))
    f2_num = poly.add(poly.mul(b22, q2), poly.mul(p2, a22))
    cross = poly.mul(poly.mul(p1, p2), poly.mul(a12, a21))
    num = poly.add(
        poly.mul(poly.mul(f1_num, f2_num), poly.mul(b12, b21)),
        poly.scale(poly.mul(cross, poly.mul(b11, b22)), -1.0),
    )
    den = poly.mul(
        poly.mul(poly.mul(q1, q2), poly.mul(b11, b22)),
        poly.mul(b12, b21),
    )
    return num, den


def oracle_determinant_values(
    device: RationalMatrix2, grid: GridParams, omega: np.ndarray
) -> np.ndarray:
    """Direct rational evaluation of the composed determinant at j*omega."""
    num, den = composed_determinant_polys(device, grid)
    s = 1j * np.asarray(omega, dtype=float)
    return poly.polyval_many(num, s) / poly.polyval_many(den, s)


def _cancel_common_roots(
    num_roots: np.ndarray, den_roots: np.ndarray, rel_tol: float = 1e-6
) -> list[complex]:
    """Drop numerator roots that exactly cancel a denominator root.

    The composed fraction is not reduced, so shared factors show up as
    coincident root pairs (to root-solver precision); true zeros never sit
    that close to a pole for admissible systems.
    """
    remaining = [complex(r) for r in num_roots]
    for p in den_roots:
        if not remaining:
            break
        dist = [abs(r - p) for r in remaining]
        k = int(np.argmin(dist))
        if dist[k] < rel_tol * (1.0 + abs(p)):
            remaining.pop(k)
    return remaining


def oracle_rhp_zeros(
    device: RationalMatrix2, grid: GridParams, rhp_tol: float = 1e-9
) -> OracleReport:
    """Count zeros of the composed determinant with Re > rhp_tol exactly.

    Presumes a self-stable device and a passive grid, so after removable
    cancellations no right-half-plane numerator root can be a spurious
    artifact of the composition.
    """
    num, den = composed_determinant_polys(device, grid)
    if poly.is_zero(num):
        raise DegenerateNumerator("composed determinant numerator is identically zero")
    diagnostics = []
    deg = poly.degree(num)
    if deg > 40:
        diagnostics.append("high-degree-numerator")
        warnings.warn(
            f"composed numerator degree {deg} > 40: root conditioning may degrade",
            RuntimeWarning,
            stacklevel=2,
        )
    roots = _cancel_common_roots(poly.roots(num), poly.roots(den))
    rhp = tuple(complex(r) for r in roots if r.real > rhp_tol)
    all_zeros = tuple(complex(r) for r in roots)
    critical = None
    slope = None
    if all_zeros:
        critical = min(all_zeros, key=lambda r: abs(r.real))
        d_num = poly.polyval(poly.derivative(num), critical)
        den_val = poly.polyval(den, critical)
        if abs(den_val) > 0.0:
            slope = d_num / den_val
    return OracleReport(
        rhp_zero_count=len(rhp),
        zeros=rhp,
        numerator_degree=deg,
        diagnostics=tuple(diagnostics),
        all_zeros=all_zeros,
        critical_zero=critical,
        critical_slope=slope,
    )


@dataclass(frozen=True)
class ConsistencyReport:
    agreement: bool
    admittance_verdict: StabilityVerdict
    impedance_verdict: StabilityVerdict
    admittance_pole: complex | None
    impedance_pole: complex | None
    dropped_omegas: tuple[float, ...]
    notes: tuple[str, ...] = ()


def consistency_check(
    device: RationalMatrix2,
    grid: GridParams,
    plan: FrequencyPlan,
    tol_sigma_rel: float = 0.05,
    tol_sigma_abs: float = 0.01,
    tol_omega: float = 0.5,
) -> ConsistencyReport:
    """Run the full pipeline in admittance and impedance form and compare.

    Raises ConsistencyViolation when the verdicts/windings differ or the two
    critical-pole estimates disagree beyond tolerance.  Isolated inversion
    failures drop single frequencies without failing the check.
    """
    from .analysis import analyze_trajectory  # local import; analysis builds on this module

    table = table_from_model(device, plan)
    adm = analyze_trajectory(return_difference_determinant(grid, table))
    imp_traj, dropped = determinant_impedance_form(grid, table)
    imp = analyze_trajectory(imp_traj)
    notes: list[str] = []
    problems: list[str] = []
    if adm.verdict.stable != imp.verdict.stable:
        problems.append(
            f"verdicts differ: admittance {adm.verdict.stable}, impedance {imp.verdict.stable}"
        )
    if adm.verdict.winding != imp.verdict.winding:
        problems.append(
            f"windings differ: admittance {adm.verdict.winding}, impedance {imp.verdict.winding}"
        )
    pole_a = adm.estimate.zero if adm.estimate is not None else None
    pole_i = imp.estimate.zero if imp.estimate is not None else None
    if (pole_a is None) != (pole_i is None):
        notes.append("critical-pole candidate exists in only one form")
    elif pole_a is not None and pole_i is not None:
        sigma_tol = tol_sigma_rel * abs(pole_a.real) + tol_sigma_abs
        if abs(pole_a.real - pole_i.real) > sigma_tol:
            problems.append(
                f"sigma_o differ: {pole_a.real:.6g} vs {pole_i.real:.6g} (tol {sigma_tol:.3g})"
            )
        if abs(pole_a.imag - pole_i.imag) > tol_omega:
            problems.append(
                f"omega_o differ: {pole_a.imag:.6g} vs {pole_i.imag:.6g} (tol {tol_omega:.3g})"
            )
    report = ConsistencyReport(
        agreement=not problems,
        admittance_verdict=adm.verdict,
        impedance_verdict=imp.verdict,
        admittance_pole=pole_a,
        impedance_pole=pole_i,
        dropped_omegas=tuple(float(w) for w in dropped),
        notes=tuple(notes),
    )
    if problems:
        raise ConsistencyViolation("; ".join(problems), adm, imp)
    return report


@dataclass(frozen=True)
class PerformanceComparison:
    n_points: int
    apsam_seconds: float
    gnc_seconds: float
    det_flops_per_point: int = DET_FLOPS_PER_POINT
    eig_flops_per_point: int = EIG_FLOPS_PER_POINT

    @property
    def apsam_faster(self) -> bool:
        return self.apsam_seconds < self.gnc_seconds


def _best_of(callable_, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        callable_()
        best = min(best, time.perf_counter() - start)
    return float(best)


def performance_comparison(
    g: np.ndarray, omega: np.ndarray, repeats: int = 5
) -> PerformanceComparison:
    """Time the trajectory route against the eigen-loci route on the same G.

    Only the ordering is meaningful (the trajectory route skips the eigenvalue
    computation entirely); absolute timings depend on the machine.
    """
    g = np.ascontiguousarray(np.asarray(g, dtype=np.complex128))
    omega = np.asarray(omega, dtype=float)

    def run_apsam():
        d = kernels.det_return_difference(g)
        traj = DeterminantTrajectory(omega, d.real, d.imag)
        usable = [c for c in detect_crossings(traj) if not c.origin_pass]
        assess(build_idta(usable))

    def run_gnc():
        loci = eigen_loci(g, omega)
        gnc_verdict(loci)

    return PerformanceComparison(
        n_points=int(omega.shape[0]),
        apsam_seconds=_best_of(run_apsam, repeats),
        gnc_seconds=_best_of(run_gnc, repeats),
    )
