"""End-to-end analysis of one determinant trajectory.

Wires crossing detection, the cyclic crossing curve, the verdict and the
critical-pole estimate together, including the single automatic refinement
retry on a non-adjacent crossing sequence and the marginal (origin-pass)
classification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .critical_pole import (
    DEFAULT_REFINE_STEP_HZ,
    CriticalPoleEstimate,
    estimate_critical_pole,
    find_candidate_frequency,
)
from .errors import FlatSlope, NoCandidate, NonAdjacentSequence
from .idta import IdtaCurve, StabilityVerdict, assess, build_idta
from .models import GridParams, grid_singular_mask
from .sweep import FrequencyResponseTable
from .trajectory import (
    PIECEWISE_LINEAR,
    Crossing,
    DeterminantTrajectory,
    detect_crossings,
    return_difference_determinant,
    splice_refinement,
)


@dataclass(frozen=True)
class AnalysisOutcome:
    """Everything one trajectory analysis produced."""

    trajectory: DeterminantTrajectory
    crossings: tuple[Crossing, ...]
    curve: IdtaCurve
    verdict: StabilityVerdict
    estimate: CriticalPoleEstimate | None
    no_candidate: bool
    marginal: bool
    diagnostics: tuple[str, ...]

    @property
    def exit_code(self) -> int:
        """0 stable, 10 unstable, 11 marginal (origin pass)."""
        if self.marginal:
            return 11
        return 0 if self.verdict.stable else 10


def analyze_trajectory(
    traj: DeterminantTrajectory,
    interp_method: str = PIECEWISE_LINEAR,
    refine_step_hz: float = DEFAULT_REFINE_STEP_HZ,
    max_refine_retries: int = 1,
) -> AnalysisOutcome:
    """Full qualitative + quantitative assessment of one trajectory.

    A NonAdjacentSequence from the curve builder triggers one retry with the
    offending interval refined tenfold (piecewise-linear); if the retry fails
    too, the error propagates for the caller to report.
    """
    diagnostics: list[str] = []
    current = traj
    retries = 0
    while True:
        crossings = detect_crossings(current)
        usable = [c for c in crossings if not c.origin_pass]
        try:
            curve = build_idta(usable, source_form=current.form)
            break
        except NonAdjacentSequence as exc:
            if retries >= max_refine_retries:
                raise
            retries += 1
            diagnostics.append(
                f"refined trajectory 10x over ({exc.omega_lo:.6g}, {exc.omega_hi:.6g}) rad/s"
            )
            current = splice_refinement(current, exc.omega_lo, exc.omega_hi, factor=10)
    origin_passes = [c for c in crossings if c.origin_pass]
    if origin_passes:
        diagnostics.append(f"origin-pass crossings: {len(origin_passes)} (marginal)")
    if any(c.low_resolution for c in crossings):
        diagnostics.append("low-resolution ambiguous interval")
    gap = current.boundary_settlement_gap()
    if gap > 0.05:
        diagnostics.append(
            f"sweep endpoints disagree by {gap:.3g} (relative): trajectory may not be settled"
        )
    verdict = assess(curve)
    estimate = None
    no_candidate = False
    try:
        omega_star = find_candidate_frequency(current, crossings)
        estimate = estimate_critical_pole(
            current, omega_star, method=interp_method, step_hz=refine_step_hz
        )
    except NoCandidate:
        no_candidate = True
        diagnostics.append("no critical zero: qualitative verdict only")
    except FlatSlope:
        no_candidate = True
        diagnostics.append("flat local slope: qualitative verdict only")
    return AnalysisOutcome(
        trajectory=current,
        crossings=tuple(crossings),
        curve=curve,
        verdict=StabilityVerdict(
            stable=verdict.stable,
            winding=verdict.winding,
            first_coordinate=verdict.first_coordinate,
            last_coordinate=verdict.last_coordinate,
            diagnostics=verdict.diagnostics + tuple(diagnostics),
        ),
        estimate=estimate,
        no_candidate=no_candidate,
        marginal=bool(origin_passes),
        diagnostics=tuple(diagnostics),
    )


def analyze_table(
    grid: GridParams,
    table: FrequencyResponseTable,
    interp_method: str = PIECEWISE_LINEAR,
    refine_step_hz: float = DEFAULT_REFINE_STEP_HZ,
) -> AnalysisOutcome:
    """Analysis straight from an admittance table.

    Table rows sitting on a grid-impedance pole are dropped up front (with a
    diagnostic) instead of failing the determinant evaluation.
    """
    mask = grid_singular_mask(table.omega, grid)
    dropped: list[float] = []
    if mask.any():
        dropped = [float(w) for w in table.omega[mask]]
        table = table.subset(~mask)
    traj = return_difference_determinant(grid, table)
    outcome = analyze_trajectory(traj, interp_method, refine_step_hz)
    if dropped:
        extra = (f"dropped {len(dropped)} grid-singular frequencies",)
        outcome = AnalysisOutcome(
            trajectory=outcome.trajectory,
            crossings=outcome.crossings,
            curve=outcome.curve,
            verdict=StabilityVerdict(
                stable=outcome.verdict.stable,
                winding=outcome.verdict.winding,
                first_coordinate=outcome.verdict.first_coordinate,
                last_coordinate=outcome.verdict.last_coordinate,
                diagnostics=outcome.verdict.diagnostics + extra,
            ),
            estimate=outcome.estimate,
            no_candidate=outcome.no_candidate,
            marginal=outcome.marginal,
            diagnostics=outcome.diagnostics + extra,
        )
    return outcome
