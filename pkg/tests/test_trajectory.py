import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greybox_stability.errors import InsufficientSamples, SingularInversion
from greybox_stability.models import GridParams, RationalFunction, RationalMatrix2
from greybox_stability.sweep import FrequencyPlan, FrequencyResponseTable, table_from_model
from greybox_stability.synthetic import SUITE_PLAN
from greybox_stability.trajectory import (
    CrossingKind,
    DeterminantTrajectory,
    detect_crossings,
    determinant_impedance_form,
    interpolate,
    return_difference_determinant,
    splice_refinement,
)
from greybox_stability.verify import oracle_determinant_values

OMEGA1 = 100.0 * math.pi


def make_traj(omega, re, im, form="admittance-form"):
    return DeterminantTrajectory(
        np.asarray(omega, dtype=float),
        np.asarray(re, dtype=float),
        np.asarray(im, dtype=float),
        form,
    )


def test_zero_admittance_gives_unit_determinant():
    f = np.linspace(-100.0, 100.0, 41)
    table = FrequencyResponseTable(f, np.zeros((41, 2, 2), dtype=complex))
    grid = GridParams(rs=0.5, l_total=1e-3, omega1=OMEGA1)
    traj = return_difference_determinant(grid, table)
    assert np.allclose(traj.re, 1.0) and np.allclose(traj.im, 0.0)


def test_diagonal_hand_expansion():
    rng = np.random.default_rng(2)
    f = np.linspace(-60.0, 60.0, 31)
    y = np.zeros((31, 2, 2), dtype=complex)
    y[:, 0, 0] = rng.standard_normal(31) + 1j * rng.standard_normal(31)
    y[:, 1, 1] = rng.standard_normal(31) + 1j * rng.standard_normal(31)
    table = FrequencyResponseTable(f, y)
    grid = GridParams(rs=0.2, l_total=5e-4, omega1=OMEGA1)
    traj = return_difference_determinant(grid, table)
    from greybox_stability.models import grid_impedance_array

    z = grid_impedance_array(table.omega, grid)
    expected = (1 + z[:, 0, 0] * y[:, 0, 0]) * (1 + z[:, 1, 1] * y[:, 1, 1])
    assert np.allclose(traj.re + 1j * traj.im, expected, rtol=1e-12)


def test_determinant_matches_closed_form(suite):
    system = suite[3]
    table = table_from_model(system.device, SUITE_PLAN)
    traj = return_difference_determinant(system.grid, table)
    rng = np.random.default_rng(0)
    idx = rng.integers(0, len(table), 20)
    exact = oracle_determinant_values(system.device, system.grid, table.omega[idx])
    observed = traj.re[idx] + 1j * traj.im[idx]
    assert np.allclose(observed, exact, rtol=1e-10)


def test_detect_no_crossings():
    t = make_traj([0.0, 1.0, 2.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0])
    assert detect_crossings(t) == []


def test_detect_imaginary_zero_crossing():
    # D = 1 + j*omega sampled at -1, 0, 1
    t = make_traj([-1.0, 0.0, 1.0], [1.0, 1.0, 1.0], [-1.0, 0.0, 1.0])
    found = detect_crossings(t)
    assert len(found) == 1
    c = found[0]
    assert c.kind is CrossingKind.POS_REAL
    assert c.omega_cross == pytest.approx(0.0)
    assert c.on_axis_value == pytest.approx(1.0)


def test_detect_negative_imag_axis_crossing():
    t = make_traj([0.0, 1.0], [1.0, -1.0], [-0.5, -0.5])
    found = detect_crossings(t)
    assert len(found) == 1
    c = found[0]
    assert c.kind is CrossingKind.NEG_IMAG
    assert c.omega_cross == pytest.approx(0.5)
    assert c.on_axis_value == pytest.approx(-0.5)


def test_exact_zero_sample_counted_once():
    # im hits zero exactly at the middle sample; re stays positive
    t = make_traj([0.0, 1.0, 2.0], [1.0, 1.0, 1.0], [-1.0, 0.0, 1.0])
    found = [c for c in detect_crossings(t) if c.axis == "real"]
    assert len(found) == 1
    assert found[0].index == 0  # attributed to the interval on its left


def test_ambiguous_interval_flagged():
    # both re and im change sign within one interval
    t = make_traj([0.0, 1.0], [1.0, -1.0], [-0.4, 0.6])
    found = detect_crossings(t)
    assert len(found) == 2
    assert all(c.ambiguous for c in found)
    assert found[0].omega_cross <= found[1].omega_cross


def test_origin_pass_flagged():
    t = make_traj([0.0, 1.0, 2.0], [1e-12, -1e-12, 1.0], [-1e-12, 1e-12, 1.0])
    found = detect_crossings(t)
    assert any(c.origin_pass for c in found)


def test_crossing_sign_predicate_and_scale_invariance(suite):
    system = suite[4]
    table = table_from_model(system.device, SUITE_PLAN)
    traj = return_difference_determinant(system.grid, table)
    found = detect_crossings(traj)
    assert found, "expected crossings on a near-critical system"
    tol = 1e-9 * traj.max_magnitude
    for c in found:
        if c.origin_pass:
            continue
        if c.kind is CrossingKind.POS_REAL:
            assert c.on_axis_value > 0
        elif c.kind is CrossingKind.NEG_REAL:
            assert c.on_axis_value < 0
        elif c.kind is CrossingKind.NEG_IMAG:
            assert c.on_axis_value < 0
        else:
            assert c.on_axis_value > 0
    scaled = make_traj(traj.omega, 7.5 * traj.re, 7.5 * traj.im, traj.form)
    found_scaled = detect_crossings(scaled)
    assert [c.kind for c in found_scaled] == [c.kind for c in found]
    assert [c.index for c in found_scaled] == [c.index for c in found]


@settings(max_examples=40, deadline=None)
@given(
    data=st.lists(
        st.tuples(st.floats(-5, 5, allow_nan=False), st.floats(-5, 5, allow_nan=False)),
        min_size=2,
        max_size=24,
    )
)
def test_crossings_interpolate_within_interval(data):
    omega = np.arange(len(data), dtype=float)
    re = np.array([d[0] for d in data])
    im = np.array([d[1] for d in data])
    t = make_traj(omega, re, im)
    for c in detect_crossings(t):
        assert omega[c.index] <= c.omega_cross <= omega[c.index + 1]


def test_interpolate_linear_exact():
    omega = np.linspace(0.0, 10.0, 11)
    t = make_traj(omega, 2.0 * omega, -omega)
    refined = interpolate(t, "piecewise-linear", step=0.25)
    assert np.allclose(refined.re, 2.0 * refined.omega)
    assert np.allclose(refined.im, -refined.omega)


def test_interpolate_lagrange_reproduces_cubic():
    omega = np.array([0.0, 1.0, 2.0, 3.0])
    cubic = lambda w: 0.5 * w**3 - w**2 + 2.0 * w - 1.0
    t = make_traj(omega, cubic(omega), omega)
    refined = interpolate(t, "lagrange", step=0.5)
    assert np.allclose(refined.re, cubic(refined.omega), atol=1e-12)


def test_interpolate_cubic_fit_reproduces_cubic():
    omega = np.linspace(0.0, 5.0, 9)
    cubic = lambda w: -0.2 * w**3 + 0.6 * w**2 - w + 0.3
    t = make_traj(omega, cubic(omega), np.zeros_like(omega))
    refined = interpolate(t, "cubic-polynomial-fit", step=0.4)
    assert np.allclose(refined.re, cubic(refined.omega), atol=1e-10)


def test_interpolate_requires_enough_samples():
    t = make_traj([0.0, 1.0, 2.0], [0.0, 1.0, 2.0], [0.0, 0.0, 0.0])
    with pytest.raises(InsufficientSamples):
        interpolate(t, "lagrange", step=0.5)


def test_interpolate_window_must_be_inside():
    t = make_traj([0.0, 1.0, 2.0], [0.0, 1.0, 2.0], [0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        interpolate(t, "piecewise-linear", step=0.5, window=(-1.0, 1.0))


def test_impedance_form_zero_admittance_raises():
    f = np.linspace(-10.0, 10.0, 5)
    table = FrequencyResponseTable(f, np.zeros((5, 2, 2), dtype=complex))
    grid = GridParams(rs=0.5, l_total=1e-3, omega1=OMEGA1)
    with pytest.raises(SingularInversion):
        determinant_impedance_form(grid, table)


def test_impedance_form_drops_isolated_singular_point():
    f = np.linspace(-10.0, 10.0, 5)
    y = np.tile(np.eye(2, dtype=complex), (5, 1, 1))
    y[2] = 0.0  # one singular frequency
    table = FrequencyResponseTable(f, y)
    grid = GridParams(rs=0.5, l_total=1e-3, omega1=OMEGA1)
    traj, dropped = determinant_impedance_form(grid, table)
    assert len(traj) == 4
    assert dropped.shape == (1,)


def test_impedance_form_scalar_relation():
    # diagonal device: impedance form equals the admittance form divided by
    # det(Z_grid * Y), checked pointwise
    f = np.linspace(-40.0, 40.0, 17)
    rng = np.random.default_rng(9)
    y = np.zeros((17, 2, 2), dtype=complex)
    y[:, 0, 0] = 1.0 + 0.3 * rng.standard_normal(17) + 0.2j * rng.standard_normal(17)
    y[:, 1, 1] = 1.5 + 0.3 * rng.standard_normal(17) - 0.1j * rng.standard_normal(17)
    table = FrequencyResponseTable(f, y)
    grid = GridParams(rs=0.4, l_total=1e-3, omega1=OMEGA1)
    adm = return_difference_determinant(grid, table)
    imp, dropped = determinant_impedance_form(grid, table)
    assert dropped.size == 0
    from greybox_stability.models import grid_impedance_array

    z = grid_impedance_array(table.omega, grid)
    det_c = z[:, 0, 0] * y[:, 0, 0] * z[:, 1, 1] * y[:, 1, 1]
    assert np.allclose(
        (adm.re + 1j * adm.im) / det_c, imp.re + 1j * imp.im, rtol=1e-9
    )


def test_boundary_settlement_gap():
    t = make_traj([0.0, 1.0, 2.0], [1.0, 5.0, 1.0], [0.0, 1.0, 0.0])
    assert t.boundary_settlement_gap() == pytest.approx(0.0)
    t2 = make_traj([0.0, 1.0, 2.0], [1.0, 5.0, 2.0], [0.0, 1.0, 0.0])
    assert t2.boundary_settlement_gap() > 0.4


def test_splice_refinement_preserves_untouched_samples():
    omega = np.linspace(0.0, 10.0, 11)
    t = make_traj(omega, omega**2, -omega)
    refined = splice_refinement(t, 4.0, 6.0, factor=10)
    assert len(refined) > len(t)
    assert np.all(np.diff(refined.omega) > 0)
    # outside the window nothing changed
    assert refined.re[0] == t.re[0] and refined.re[-1] == t.re[-1]
