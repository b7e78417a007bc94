"""Domain models: the white-box grid, rational device models, 2x2 carriers.

Angular frequencies are rad/s throughout; helpers convert from Hz where the
sweep planning layer works in Hz.  Negative frequencies are legal and required:
the grid's second diagonal channel is evaluated at the coupling shift
``s2 = s - 2j*omega1``, which destroys conjugate symmetry, so every consumer
must sweep both signs of omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import polynomials as poly
from .errors import PoleHit, SingularFrequency

TWO_PI = 2.0 * math.pi

#: absolute floor under which a denominator magnitude counts as a pole hit
DEFAULT_POLE_FLOOR = 1e-12

#: |Re root| below this counts as "on the imaginary axis" for stability checks
DEFAULT_AXIS_TOL = 1e-9


def hz_to_rad(f_hz):
    return TWO_PI * f_hz


def rad_to_hz(omega):
    return omega / TWO_PI


@dataclass(frozen=True)
class ComplexMat2:
    """A 2x2 complex matrix sample (admittance, impedance or return-ratio)."""

    e11: complex
    e12: complex
    e21: complex
    e22: complex

    def __post_init__(self):
        for name in ("e11", "e12", "e21", "e22"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"non-finite matrix entry {name}={v!r}")
            object.__setattr__(self, name, v)

    @classmethod
    def from_array(cls, a) -> "ComplexMat2":
        a = np.asarray(a)
        return cls(a[0, 0], a[0, 1], a[1, 0], a[1, 1])

    def as_array(self) -> np.ndarray:
        return np.array([[self.e11, self.e12], [self.e21, self.e22]], dtype=complex)

    def det(self) -> complex:
        return self.e11 * self.e22 - self.e12 * self.e21


@dataclass(frozen=True)
class GridParams:
    """Series R-L(-C) grid model with a frequency-shifted twin on the diagonal.

    The impedance is diagonal: the first channel is evaluated at s = j*omega,
    the second at s2 = j*(omega - 2*omega1).  An optional series capacitor adds
    1/(s*Cs) per channel and makes omega = 0 and omega = 2*omega1 singular.
    """

    rs: float
    l_total: float
    omega1: float
    cs: float | None = None

    def __post_init__(self):
        if not (self.rs >= 0 and math.isfinite(self.rs)):
            raise ValueError(f"rs must be finite and >= 0, got {self.rs!r}")
        if not (self.l_total >= 0 and math.isfinite(self.l_total)):
            raise ValueError(f"l_total must be finite and >= 0, got {self.l_total!r}")
        if not (self.omega1 > 0 and math.isfinite(self.omega1)):
            raise ValueError(f"omega1 must be finite and > 0, got {self.omega1!r}")
        if self.cs is not None and not (self.cs > 0 and math.isfinite(self.cs)):
            raise ValueError(f"cs must be finite and > 0 when present, got {self.cs!r}")

    def singular_omegas(self) -> tuple[float, ...]:
        """Frequencies (rad/s) where the impedance has a pole (capacitor only)."""
        if self.cs is None:
            return ()
        return (0.0, 2.0 * self.omega1)

    def f1_hz(self) -> float:
        return rad_to_hz(self.omega1)


def _diag_entry(s: complex, p: GridParams) -> complex:
    z = p.rs + s * p.l_total
    if p.cs is not None:
        z += 1.0 / (s * p.cs)
    return z


_SINGULAR_ATOL = 1e-9  # rad/s; planned grids never come this close legitimately


def grid_impedance(omega: float, p: GridParams) -> ComplexMat2:
    """Diagonal grid impedance at one frequency.

    Raises SingularFrequency when the capacitor is present and either channel
    sits on its pole (omega = 0 for the first, omega = 2*omega1 for the
    second); callers must exclude those grid points from sweep plans.
    """
    if not math.isfinite(omega):
        raise ValueError(f"omega must be finite, got {omega!r}")
    if p.cs is not None:
        if abs(omega) <= _SINGULAR_ATOL:
            raise SingularFrequency(omega)
        if abs(omega - 2.0 * p.omega1) <= _SINGULAR_ATOL * max(1.0, 2.0 * p.omega1):
            raise SingularFrequency(omega)
    s = 1j * omega
    s2 = 1j * (omega - 2.0 * p.omega1)
    return ComplexMat2(_diag_entry(s, p), 0j, 0j, _diag_entry(s2, p))


def grid_singular_mask(omega: np.ndarray, p: GridParams) -> np.ndarray:
    """Boolean mask of frequencies where grid_impedance would raise."""
    omega = np.asarray(omega, dtype=float)
    mask = np.zeros(omega.shape, dtype=bool)
    if p.cs is not None:
        mask |= np.abs(omega) <= _SINGULAR_ATOL
        mask |= np.abs(omega - 2.0 * p.omega1) <= _SINGULAR_ATOL * max(1.0, 2.0 * p.omega1)
    return mask


def grid_impedance_array(omega: np.ndarray, p: GridParams) -> np.ndarray:
    """Vectorized grid impedance, shape (n, 2, 2)."""
    omega = np.asarray(omega, dtype=float)
    bad = grid_singular_mask(omega, p)
    if bad.any():
        raise SingularFrequency(float(omega[bad][0]))
    s = 1j * omega
    s2 = 1j * (omega - 2.0 * p.omega1)
    out = np.zeros((omega.shape[0], 2, 2), dtype=np.complex128)
    z11 = p.rs + s * p.l_total
    z22 = p.rs + s2 * p.l_total
    if p.cs is not None:
        z11 = z11 + 1.0 / (s * p.cs)
        z22 = z22 + 1.0 / (s2 * p.cs)
    out[:, 0, 0] = z11
    out[:, 1, 1] = z22
    return out


def grid_impedance_rational(
    p: GridParams,
) -> tuple[tuple[tuple[complex, ...], tuple[complex, ...]], tuple[tuple[complex, ...], tuple[complex, ...]]]:
    """The two diagonal impedance channels as (num, den) coefficient pairs.

    Both are functions of the sweep variable s (the second channel is already
    shifted to s2 = s - 2j*omega1).  Plain pairs, not RationalFunction: a
    series R-L impedance is improper, which is fine for the grid side.
    """
    shift = -2j * p.omega1

    def channel(shifted: bool):
        # base polynomial Rs + L*x evaluated at x = s (+ shift)
        if shifted:
            lin = poly.trim((p.rs + p.l_total * shift, complex(p.l_total)))
        else:
            lin = poly.trim((complex(p.rs), complex(p.l_total)))
        if p.cs is None:
            return lin, (1.0 + 0j,)
        # Rs + L*x + 1/(Cs*x)  ->  (L*Cs*x^2 + Rs*Cs*x + 1) / (Cs*x)
        x = (shift, 1.0 + 0j) if shifted else (0j, 1.0 + 0j)
        num = poly.add(poly.mul(poly.scale(lin, p.cs), x), (1.0,))
        den = poly.scale(x, p.cs)
        return num, den

    return channel(False), channel(True)


@dataclass(frozen=True)
class RationalFunction:
    """num(s)/den(s) with ascending-power complex coefficients.

    Invariants: the denominator is not identically zero, its leading
    coefficient is nonzero (guaranteed by trimming), and deg(num) <= deg(den)
    so the function is causal.  The zero numerator is allowed.
    """

    num: tuple[complex, ...]
    den: tuple[complex, ...]

    def __post_init__(self):
        num = poly.trim(self.num)
        den = poly.trim(self.den)
        if poly.is_zero(den):
            raise ValueError("denominator is identically zero")
        for c in num + den:
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError("non-finite coefficient")
        if not poly.is_zero(num) and len(num) > len(den):
            raise ValueError(
                f"non-causal rational function: deg(num)={len(num) - 1} > deg(den)={len(den) - 1}"
            )
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def is_zero(self) -> bool:
        return poly.is_zero(self.num)

    def __call__(self, s: complex, pole_floor: float = DEFAULT_POLE_FLOOR) -> complex:
        return eval_rational(self, s, pole_floor=pole_floor)

    def poles(self) -> np.ndarray:
        return poly.roots(self.den)

    def zeros(self) -> np.ndarray:
        return poly.roots(self.num)


def constant_rational(value: complex) -> RationalFunction:
    return RationalFunction((complex(value),), (1.0,))


ZERO_RATIONAL = RationalFunction((0j,), (1.0,))


@dataclass(frozen=True)
class RationalMatrix2:
    """A 2x2 matrix of rational functions (closed-form synthetic device)."""

    e11: RationalFunction
    e12: RationalFunction
    e21: RationalFunction
    e22: RationalFunction

    def entries(self):
        yield "e11", self.e11
        yield "e12", self.e12
        yield "e21", self.e21
        yield "e22", self.e22

    @classmethod
    def diagonal(cls, f1: RationalFunction, f2: RationalFunction) -> "RationalMatrix2":
        return cls(f1, ZERO_RATIONAL, ZERO_RATIONAL, f2)


def eval_rational(f: RationalFunction, s: complex, pole_floor: float = DEFAULT_POLE_FLOOR) -> complex:
    """Horner evaluation of num(s)/den(s); PoleHit if |den(s)| < pole_floor."""
    den = poly.polyval(f.den, s)
    if abs(den) < pole_floor:
        raise PoleHit(s)
    return poly.polyval(f.num, s) / den


def eval_rational_array(f: RationalFunction, s: np.ndarray, pole_floor: float = DEFAULT_POLE_FLOOR) -> np.ndarray:
    den = poly.polyval_many(f.den, s)
    small = np.abs(den) < pole_floor
    if small.any():
        raise PoleHit(complex(np.asarray(s)[small][0]))
    return poly.polyval_many(f.num, s) / den


def eval_rational_matrix(m: RationalMatrix2, omega: float) -> ComplexMat2:
    """Entrywise evaluation at s = j*omega; PoleHit carries the entry position."""
    s = 1j * omega
    vals = {}
    for name, f in m.entries():
        try:
            vals[name] = eval_rational(f, s)
        except PoleHit as exc:
            raise PoleHit(s, entry=name) from exc
    return ComplexMat2(vals["e11"], vals["e12"], vals["e21"], vals["e22"])


def eval_rational_matrix_array(m: RationalMatrix2, omega: np.ndarray) -> np.ndarray:
    """Vectorized entrywise evaluation over a frequency grid, shape (n, 2, 2)."""
    omega = np.asarray(omega, dtype=float)
    s = 1j * omega
    out = np.empty((omega.shape[0], 2, 2), dtype=np.complex128)
    index = {"e11": (0, 0), "e12": (0, 1), "e21": (1, 0), "e22": (1, 1)}
    for name, f in m.entries():
        try:
            out[:, index[name][0], index[name][1]] = eval_rational_array(f, s)
        except PoleHit as exc:
            raise PoleHit(exc.s, entry=name) from exc
    return out


@dataclass(frozen=True)
class SelfStabilityReport:
    stable: bool
    offending_roots: tuple[complex, ...]
    checked_zeros: bool = False

    def __bool__(self) -> bool:
        return self.stable


def check_self_stable(
    m: RationalMatrix2,
    include_zeros: bool = False,
    tol: float = DEFAULT_AXIS_TOL,
) -> SelfStabilityReport:
    """Verify every denominator root lies strictly left of the imaginary axis.

    ``include_zeros=True`` additionally requires numerator roots in the open
    left half-plane (used when the model will be inverted to impedance form).
    A root is offending when Re(root) >= -tol.
    """
    offending: list[complex] = []
    for _, f in m.entries():
        for r in f.poles():
            if r.real >= -tol:
                offending.append(complex(r))
        if include_zeros and not f.is_zero:
            for r in f.zeros():
                if r.real >= -tol:
                    offending.append(complex(r))
    return SelfStabilityReport(not offending, tuple(offending), include_zeros)
