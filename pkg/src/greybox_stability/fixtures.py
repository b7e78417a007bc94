"""Named demonstration systems with oracle-confirmed behaviour.

Each fixture is built deterministically (fixed seeds found during
development); the tests re-verify every advertised property against the exact
rational oracle rather than trusting the construction.  The bundled demo
configuration files under ``demo/`` are generated from these fixtures by
``scripts/make_demo_configs.py``.
"""

from __future__ import annotations

import math
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import polynomials as poly
from .models import GridParams, RationalFunction, RationalMatrix2, TWO_PI
from .synthetic import (
    DEFAULT_GRID,
    SUITE_PLAN,
    SyntheticSystem,
    coupling_channel,
    guarded_plan,
    make_system,
)
from .verify import oracle_rhp_zeros


@lru_cache(maxsize=None)
def simulation_like_pair() -> tuple[SyntheticSystem, SyntheticSystem]:
    """Two gain-variant style cases near 55 Hz: one stable, one unstable."""
    rng = np.random.default_rng(101)
    stable = make_system(
        rng, "sim-stable", ((0, complex(-0.16, TWO_PI * 55.5)),), grid=DEFAULT_GRID
    )
    unstable = make_system(
        rng, "sim-unstable", ((0, complex(0.26, TWO_PI * 55.1)),), grid=DEFAULT_GRID
    )
    return stable, unstable


#: sweep plan for the series-capacitor scenarios (dodges the grid poles)
EXPERIMENT_PLAN = guarded_plan(step_hz=1.0)


@lru_cache(maxsize=None)
def experiment_like_trio() -> tuple[SyntheticSystem, SyntheticSystem, SyntheticSystem]:
    """Series-compensation style cases near 5 Hz: stable, unstable, worse.

    Three capacitor settings with per-scenario devices planted at the
    qualitative critical poles of the hardware episode this mimics.
    """
    cases = (
        ("exp-cs-high", 0.10, complex(-0.262, TWO_PI * 3.52), 0),
        ("exp-cs-mid", 0.08, complex(1.456, TWO_PI * 4.80), 1),
        ("exp-cs-low", 0.06, complex(2.747, TWO_PI * 5.84), 1),
    )
    systems = []
    for name, cs, z0, want in cases:
        grid = GridParams(rs=0.25, l_total=0.01, omega1=100.0 * math.pi, cs=cs)
        rng = np.random.default_rng(4000)
        systems.append(
            make_system(rng, name, ((0, z0),), grid=grid, expected_rhp=want, max_tries=200)
        )
    return tuple(systems)


@lru_cache(maxsize=None)
def wind_batch_five() -> tuple[SyntheticSystem, ...]:
    """Five operating-point scenarios: three stable, two unstable.

    Damping worsens monotonically, mimicking decreasing wind speed; the batch
    command demo ranks them worst-first.
    """
    cases = (
        ("v12", -2.5, 31.0, 0),
        ("v10", -1.2, 33.0, 0),
        ("v8", -0.45, 35.0, 0),
        ("v6", 0.9, 37.0, 1),
        ("v4", 2.3, 39.0, 1),
    )
    systems = []
    for name, sigma, f0, want in cases:
        rng = np.random.default_rng(5000)
        systems.append(
            make_system(
                rng, name, ((0, complex(sigma, TWO_PI * f0)),),
                grid=DEFAULT_GRID, expected_rhp=want,
            )
        )
    return tuple(systems)


def _scaled_coupling(entry: RationalFunction, gain: float) -> RationalFunction:
    return RationalFunction(poly.scale(entry.num, gain), entry.den)


@lru_cache(maxsize=None)
def misjudgment_pair() -> tuple[RationalMatrix2, GridParams]:
    """Asymmetric-coupling device whose diagonal truncation flips the verdict.

    The diagonal part alone is stable (near-critical); the off-diagonal
    admittance pushes one zero into the right half-plane.  The coupling gain
    is found by bisection against the oracle and then pushed 25% past the
    flip, so both verdicts carry a margin.
    """
    rng = np.random.default_rng(424)
    base = make_system(
        rng, "coupling-base", ((0, complex(-0.3, TWO_PI * 55.0)),), grid=DEFAULT_GRID
    )
    probe = TWO_PI * np.linspace(-1000.0, 1000.0, 801)
    from .models import grid_impedance_rational

    z1, z2 = grid_impedance_rational(base.grid)

    for _attempt in range(30):
        e12 = coupling_channel(z1, rng, probe, 1.0)
        e21 = coupling_channel(z2, rng, probe, 1.0)

        def coupled(gain: float) -> RationalMatrix2:
            return RationalMatrix2(
                base.device.e11,
                _scaled_coupling(e12, gain),
                _scaled_coupling(e21, gain),
                base.device.e22,
            )

        def count(gain: float) -> int:
            return oracle_rhp_zeros(coupled(gain), base.grid).rhp_zero_count

        lo, hi = 0.0, 1.0
        while count(hi) == 0 and hi <= 64.0:
            lo, hi = hi, 2.0 * hi
        if hi > 64.0:
            continue  # this coupling direction stabilizes; draw another
        for _ in range(24):
            mid = 0.5 * (lo + hi)
            if count(mid) == 0:
                lo = mid
            else:
                hi = mid
        device = coupled(1.25 * hi)
        if oracle_rhp_zeros(device, base.grid).rhp_zero_count >= 1:
            return device, base.grid
    raise RuntimeError("coupling fixture: no destabilizing coupling found")


@lru_cache(maxsize=None)
def near_critical_interval_system() -> SyntheticSystem:
    """Near-critical system whose 2 Hz sweep misjudges the damping sign.

    Found by a deterministic seed scan: the 2 Hz estimate has the wrong sign
    of sigma while 1 Hz and 0.5 Hz are correct and the estimate error shrinks
    monotonically with the interval (the fixture for the interval study).
    """
    from .analysis import analyze_table
    from .sweep import table_from_model
    from .synthetic import uniform_plan

    for seed in _INTERVAL_FIXTURE_SEEDS:
        rng = np.random.default_rng(seed)
        sigma = 0.12 + 0.1 * rng.uniform()
        f0 = 50.0 + 15.0 * rng.uniform()
        try:
            system = make_system(
                rng, f"interval-{seed}", ((0, complex(sigma, TWO_PI * f0)),),
                grid=DEFAULT_GRID, max_tries=60,
            )
        except RuntimeError:
            continue
        zc = system.oracle.critical_zero
        errors = {}
        signs = {}
        usable = True
        for step in (2.0, 1.0, 0.5):
            table = table_from_model(system.device, uniform_plan(step))
            try:
                outcome = analyze_table(system.grid, table)
            except Exception:
                usable = False
                break
            if outcome.estimate is None:
                usable = False
                break
            errors[step] = abs(outcome.estimate.zero - zc)
            signs[step] = outcome.estimate.sigma_o > 0
        if not usable:
            continue
        want = zc.real > 0
        if (
            signs[2.0] != want
            and signs[1.0] == want
            and signs[0.5] == want
            and errors[2.0] > errors[1.0] >= errors[0.5]
        ):
            return system
    raise RuntimeError("no interval-study fixture found in the seed list")


#: deterministic scan order for the interval fixture (first hit wins)
_INTERVAL_FIXTURE_SEEDS = tuple(range(7000, 7400))


DEMO_DIR = Path(__file__).resolve().parent / "demo"

DEMO_CONFIGS = (
    "stable.json",
    "unstable.json",
    "experiment_cs.json",
    "batch_wind.json",
    "near_critical.json",
)


def demo_config_path(name: str) -> Path:
    """Absolute path of a bundled demo configuration file."""
    if not name.endswith(".json"):
        name = name + ".json"
    path = DEMO_DIR / name
    if not path.exists():
        raise FileNotFoundError(f"no bundled demo config {name!r} (have {DEMO_CONFIGS})")
    return path
