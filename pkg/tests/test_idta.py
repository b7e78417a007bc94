import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greybox_stability.analysis import analyze_trajectory
from greybox_stability.errors import InconsistentCurve, NonAdjacentSequence
from greybox_stability.idta import IdtaCurve, assess, build_idta, stable_region
from greybox_stability.sweep import table_from_model
from greybox_stability.synthetic import SUITE_PLAN
from greybox_stability.trajectory import (
    Crossing,
    CrossingKind,
    DeterminantTrajectory,
    detect_crossings,
    return_difference_determinant,
)

K1, K2, K3, K4 = (
    CrossingKind.POS_REAL,
    CrossingKind.NEG_IMAG,
    CrossingKind.NEG_REAL,
    CrossingKind.POS_IMAG,
)


def crossings_of(kinds):
    out = []
    for i, kind in enumerate(kinds):
        value = 1.0 if kind in (K1, K4) else -1.0
        out.append(
            Crossing(index=i, omega_cross=float(i), kind=kind, on_axis_value=value)
        )
    return out


def coordinates(kinds):
    return [p.coordinate for p in build_idta(crossings_of(kinds)).points]


def test_full_clockwise_loop():
    assert coordinates([K1, K2, K3, K4, K1]) == [1, 2, 3, 4, 5]


def test_no_loop_sequence():
    assert coordinates([K1, K2, K2, K1]) == [1, 2, 2, 1]


def test_wraparound_goes_up_not_down():
    assert coordinates([K4, K1]) == [4, 5]


def test_counterclockwise_steps_down():
    assert coordinates([K2, K1, K4]) == [2, 1, 0]


def test_non_adjacent_kinds_raise():
    with pytest.raises(NonAdjacentSequence):
        build_idta(crossings_of([K1, K3]))


def test_build_rejects_origin_passes():
    c = Crossing(index=0, omega_cross=0.0, kind=K1, on_axis_value=0.0, origin_pass=True)
    with pytest.raises(ValueError):
        build_idta([c])


def test_stable_region():
    assert stable_region(K1) == (0, 1, 2)
    assert stable_region(K4) == (3, 4, 5)


def test_assess_loop_unstable():
    verdict = assess(build_idta(crossings_of([K1, K2, K3, K4, K1])))
    assert not verdict.stable and verdict.winding == 1
    assert verdict.last_coordinate not in stable_region(K1)


def test_assess_flat_stable():
    verdict = assess(build_idta(crossings_of([K1, K2, K2, K1])))
    assert verdict.stable and verdict.winding == 0
    assert verdict.last_coordinate in stable_region(K1)


def test_assess_empty_curve_is_stable():
    verdict = assess(IdtaCurve(points=()))
    assert verdict.stable and verdict.winding == 0
    assert "no-crossings" in verdict.diagnostics


def test_assess_two_loops():
    kinds = [K1, K2, K3, K4] * 2 + [K1]
    verdict = assess(build_idta(crossings_of(kinds)))
    assert verdict.winding == 2


def test_inconsistent_curve_detected():
    curve = build_idta(crossings_of([K1, K2, K3]))
    with pytest.raises(InconsistentCurve):
        assess(curve)


@settings(max_examples=60, deadline=None)
@given(
    steps=st.lists(st.sampled_from([-1, 0, 1]), min_size=0, max_size=20),
    start=st.sampled_from([K1, K2, K3, K4]),
)
def test_curve_invariants_hold_for_adjacent_sequences(steps, start):
    # construct kinds by walking the cyclic labels; build must reproduce the walk
    labels = [int(start)]
    for s in steps:
        labels.append(labels[-1] + s)
    kinds = [CrossingKind((lab - 1) % 4 + 1) for lab in labels]
    curve = build_idta(crossings_of(kinds))
    coords = [p.coordinate for p in curve.points]
    assert coords == labels
    for p in curve.points:
        assert (p.coordinate - int(p.kind)) % 4 == 0


def test_winding_matches_oracle_and_reversal(suite):
    system = next(s for s in suite if s.rhp_count == 1)
    table = table_from_model(system.device, SUITE_PLAN)
    traj = return_difference_determinant(system.grid, table)
    outcome = analyze_trajectory(traj)
    assert outcome.verdict.winding == system.rhp_count
    # reversing the sweep direction negates the winding
    reversed_traj = DeterminantTrajectory(
        -traj.omega[::-1], traj.re[::-1], traj.im[::-1], traj.form
    )
    reversed_outcome = analyze_trajectory(reversed_traj)
    assert reversed_outcome.verdict.winding == -outcome.verdict.winding


def test_winding_invariant_under_positive_scaling(suite):
    system = next(s for s in suite if s.rhp_count == 2)
    table = table_from_model(system.device, SUITE_PLAN)
    traj = return_difference_determinant(system.grid, table)
    scaled = DeterminantTrajectory(traj.omega, 3.7 * traj.re, 3.7 * traj.im, traj.form)
    assert analyze_trajectory(scaled).verdict.winding == system.rhp_count


def test_winding_invariant_under_crossing_free_padding(suite):
    system = next(s for s in suite if s.rhp_count == 1)
    table = table_from_model(system.device, SUITE_PLAN)
    traj = return_difference_determinant(system.grid, table)
    crossings = detect_crossings(traj)
    usable = [c for c in crossings if not c.origin_pass]
    base = assess(build_idta(usable))
    # drop leading samples that contain no crossings
    first_idx = usable[0].index
    if first_idx > 2:
        trimmed = DeterminantTrajectory(
            traj.omega[first_idx - 1 :], traj.re[first_idx - 1 :], traj.im[first_idx - 1 :],
            traj.form,
        )
        trimmed_usable = [c for c in detect_crossings(trimmed) if not c.origin_pass]
        assert assess(build_idta(trimmed_usable)).winding == base.winding
