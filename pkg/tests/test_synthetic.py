import numpy as np
import pytest

from greybox_stability.models import check_self_stable
from greybox_stability.synthetic import SUITE_PLAN, generate_suite
from greybox_stability.sweep import plan_frequencies_hz


def test_suite_is_deterministic():
    a = generate_suite(n=6, seed=123)
    b = generate_suite(n=6, seed=123)
    for s1, s2 in zip(a, b):
        assert s1.oracle.all_zeros == s2.oracle.all_zeros
        assert s1.grid == s2.grid


def test_suite_systems_are_self_stable(suite):
    for system in suite[:30]:
        assert check_self_stable(system.device).stable


def test_suite_mix_and_spread(suite):
    counts = {0: 0, 1: 0, 2: 0}
    freqs = []
    for system in suite:
        counts[system.rhp_count] += 1
        zc = system.oracle.critical_zero
        if zc is not None:
            freqs.append(abs(zc.imag) / (2 * np.pi))
    assert counts[0] >= 30 and counts[1] >= 30 and counts[2] >= 20
    assert min(freqs) < 10.0 and max(freqs) > 500.0


def test_suite_plan_covers_both_signs():
    f = plan_frequencies_hz(SUITE_PLAN)
    assert f[0] == -1000.0 and f[-1] == 1000.0
    assert f.shape[0] == 2001


def test_planted_zeros_match_oracle(suite):
    for system in suite:
        for z in system.planted:
            assert any(abs(z - r) < 10.0 for r in system.oracle.all_zeros)
