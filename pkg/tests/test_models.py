import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import greybox_stability.polynomials as poly
from greybox_stability.errors import PoleHit, SingularFrequency
from greybox_stability.models import (
    ComplexMat2,
    GridParams,
    RationalFunction,
    RationalMatrix2,
    check_self_stable,
    eval_rational,
    eval_rational_array,
    eval_rational_matrix,
    eval_rational_matrix_array,
    grid_impedance,
    grid_impedance_array,
    grid_impedance_rational,
    hz_to_rad,
)

OMEGA1 = 100.0 * math.pi


def test_grid_impedance_resistive_identity():
    p = GridParams(rs=1.0, l_total=0.0, omega1=OMEGA1)
    for omega in (-500.0, 0.0, 123.4):
        z = grid_impedance(omega, p)
        assert z.e11 == 1.0 and z.e22 == 1.0
        assert z.e12 == 0.0 and z.e21 == 0.0


def test_grid_impedance_inductive_values():
    p = GridParams(rs=0.1, l_total=0.01, omega1=OMEGA1)
    z = grid_impedance(OMEGA1, p)
    assert z.e11 == pytest.approx(0.1 + 1j * math.pi, abs=1e-12)
    # second channel shifted by -2*omega1: s2 = -j*100*pi
    assert z.e22 == pytest.approx(0.1 - 1j * math.pi, abs=1e-12)


def test_grid_impedance_capacitor_term():
    p = GridParams(rs=0.0, l_total=0.0, omega1=OMEGA1, cs=1.0)
    z = grid_impedance(10.0, p)
    assert z.e11 == pytest.approx(-0.1j, abs=1e-15)


def test_grid_impedance_capacitor_singularities():
    p = GridParams(rs=0.1, l_total=0.01, omega1=OMEGA1, cs=1e-3)
    with pytest.raises(SingularFrequency):
        grid_impedance(0.0, p)
    with pytest.raises(SingularFrequency):
        grid_impedance(2.0 * OMEGA1, p)
    with pytest.raises(SingularFrequency):
        grid_impedance_array(np.array([1.0, 0.0, 5.0]), p)


def test_grid_impedance_frequency_shift_identity():
    p = GridParams(rs=0.3, l_total=2e-3, omega1=OMEGA1, cs=5e-4)
    rng = np.random.default_rng(7)
    for omega in rng.uniform(-5000, 5000, 25):
        if abs(omega) < 1.0 or abs(omega - 2 * OMEGA1) < 1.0 or abs(omega + 2 * OMEGA1) < 1.0:
            continue
        z = grid_impedance(omega, p)
        z_shift = grid_impedance(omega - 2.0 * p.omega1, p)
        assert z.e22 == pytest.approx(z_shift.e11, rel=1e-12)


def test_grid_impedance_always_diagonal(suite):
    for system in suite[:10]:
        z = grid_impedance_array(np.linspace(-100.0, 100.0, 11), system.grid)
        assert np.all(z[:, 0, 1] == 0) and np.all(z[:, 1, 0] == 0)


def test_grid_impedance_array_matches_scalar():
    p = GridParams(rs=0.2, l_total=1e-3, omega1=OMEGA1)
    omegas = np.linspace(-900.0, 900.0, 7)
    z = grid_impedance_array(omegas, p)
    for k, w in enumerate(omegas):
        assert z[k, 0, 0] == grid_impedance(w, p).e11
        assert z[k, 1, 1] == grid_impedance(w, p).e22


def test_grid_impedance_rational_matches_direct():
    for cs in (None, 2e-3):
        p = GridParams(rs=0.15, l_total=8e-4, omega1=OMEGA1, cs=cs)
        (n1, d1), (n2, d2) = grid_impedance_rational(p)
        for omega in (-777.0, 13.5, 450.0):
            z = grid_impedance(omega, p)
            s = 1j * omega
            assert poly.polyval(n1, s) / poly.polyval(d1, s) == pytest.approx(z.e11, rel=1e-12)
            assert poly.polyval(n2, s) / poly.polyval(d2, s) == pytest.approx(z.e22, rel=1e-12)


def test_grid_params_validation():
    with pytest.raises(ValueError):
        GridParams(rs=-1.0, l_total=0.0, omega1=OMEGA1)
    with pytest.raises(ValueError):
        GridParams(rs=0.0, l_total=0.0, omega1=0.0)
    with pytest.raises(ValueError):
        GridParams(rs=0.0, l_total=0.0, omega1=OMEGA1, cs=0.0)


def test_eval_rational_examples():
    f = RationalFunction((-1.0, 1.0), (2.0, 1.0))  # (s-1)/(s+2)
    assert eval_rational(f, 0.0) == pytest.approx(-0.5)
    g = RationalFunction((1.0,), (1.0, 1.0))  # 1/(s+1)
    with pytest.raises(PoleHit):
        eval_rational(g, -1.0)
    h = RationalFunction((1.0, 0.0, 1.0), (2.0, 2.0, 1.0))  # (s^2+1)/(s^2+2s+2)
    assert eval_rational(h, 1j) == pytest.approx(0.0, abs=1e-15)


def test_eval_rational_array_matches_scalar():
    f = RationalFunction((0.5, 1j, 2.0), (1.0, 0.3, 1.0))
    s = 1j * np.linspace(-50.0, 50.0, 21)
    vals = eval_rational_array(f, s)
    for k in range(s.shape[0]):
        assert vals[k] == pytest.approx(eval_rational(f, s[k]), rel=1e-13)


def test_rational_function_invariants():
    with pytest.raises(ValueError):
        RationalFunction((1.0,), (0.0,))  # zero denominator
    with pytest.raises(ValueError):
        RationalFunction((1.0, 2.0, 3.0), (1.0, 1.0))  # non-causal
    # zero numerator is fine, trailing zero coefficients are trimmed
    f = RationalFunction((0.0,), (1.0, 1.0, 0.0))
    assert f.is_zero and len(f.den) == 2


def test_eval_rational_matrix_identity():
    ident = RationalMatrix2.diagonal(
        RationalFunction((1.0,), (1.0,)), RationalFunction((1.0,), (1.0,))
    )
    for omega in (-10.0, 0.0, 321.0):
        m = eval_rational_matrix(ident, omega)
        assert m.e11 == 1.0 and m.e22 == 1.0 and m.e12 == 0.0


def test_eval_rational_matrix_zero_frequency():
    m = RationalMatrix2.diagonal(
        RationalFunction((1.0,), (1.0, 1.0)), RationalFunction((1.0,), (1.0,))
    )
    assert eval_rational_matrix(m, 0.0).e11 == pytest.approx(1.0)


def test_eval_rational_matrix_compositional():
    rng = np.random.default_rng(3)
    entries = []
    for _ in range(4):
        num = tuple(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        den = tuple(np.concatenate([rng.standard_normal(2) + 1j * rng.standard_normal(2), [1.0]]))
        entries.append(RationalFunction(num, den))
    m = RationalMatrix2(*entries)
    omega = 1.0
    full = eval_rational_matrix(m, omega)
    assert full.e11 == eval_rational(m.e11, 1j * omega)
    assert full.e12 == eval_rational(m.e12, 1j * omega)
    assert full.e21 == eval_rational(m.e21, 1j * omega)
    assert full.e22 == eval_rational(m.e22, 1j * omega)
    stacked = eval_rational_matrix_array(m, np.array([omega]))
    assert stacked[0, 0, 0] == full.e11


def test_check_self_stable_examples():
    stable = RationalFunction((1.0,), (1.0, 1.0))
    unstable = RationalFunction((1.0,), (-0.5, 1.0))  # pole at +0.5
    m_ok = RationalMatrix2.diagonal(stable, stable)
    assert check_self_stable(m_ok).stable
    m_bad = RationalMatrix2(stable, stable, stable, unstable)
    report = check_self_stable(m_bad)
    assert not report.stable
    assert report.offending_roots[0] == pytest.approx(0.5)


def test_check_self_stable_zero_mode():
    # stable poles but a right-half-plane zero: flagged only in zero-check mode
    f = RationalFunction((-1.0, 1.0), (2.0, 1.0))
    m = RationalMatrix2.diagonal(f, f)
    assert check_self_stable(m).stable
    assert not check_self_stable(m, include_zeros=True).stable


@settings(max_examples=30, deadline=None)
@given(
    roots=st.lists(
        st.tuples(st.floats(-300.0, -1.0), st.floats(-500.0, 500.0)), min_size=1, max_size=4
    ),
    scale=st.floats(0.01, 100.0),
)
def test_check_self_stable_randomized_and_scale_invariant(roots, scale):
    den = poly.from_roots([complex(re, im) for re, im in roots])
    f = RationalFunction((1.0,), den)
    m = RationalMatrix2.diagonal(f, f)
    assert check_self_stable(m).stable
    scaled = RationalMatrix2.diagonal(
        RationalFunction(poly.scale(f.num, scale), poly.scale(f.den, scale)), f
    )
    assert check_self_stable(scaled).stable


def test_complex_mat2_rejects_non_finite():
    with pytest.raises(ValueError):
        ComplexMat2(float("nan"), 0, 0, 1)


def test_hz_to_rad_roundtrip():
    f = np.array([-1000.0, -1.5, 0.0, 62.5, 1000.0])
    assert np.allclose(hz_to_rad(f) / (2 * math.pi), f)
