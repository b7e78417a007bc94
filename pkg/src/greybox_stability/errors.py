"""Exception hierarchy shared across the package."""

from __future__ import annotations


class StabilityAnalysisError(Exception):
    """Base class for every error raised by this package."""


class SingularFrequency(StabilityAnalysisError):
    """The grid impedance has a pole at the requested frequency."""

    def __init__(self, omega, message: str | None = None):
        self.omega = omega
        super().__init__(message or f"grid impedance singular at omega={omega!r} rad/s")


class PoleHit(StabilityAnalysisError):
    """A rational function was evaluated at (or numerically on top of) a pole."""

    def __init__(self, s, entry: str | None = None):
        self.s = s
        self.entry = entry
        where = f" in entry {entry}" if entry else ""
        super().__init__(f"denominator vanishes at s={s!r}{where}")


class RootFindingFailure(StabilityAnalysisError):
    """The companion-matrix eigensolve did not converge."""


class EmptyPlan(StabilityAnalysisError):
    """A frequency plan produced fewer than two sweep points."""


class DegeneratePerturbations(StabilityAnalysisError):
    """The two perturbation vectors are (numerically) parallel."""


class SingularMeasurement(StabilityAnalysisError):
    """The perturbation matrix of a measurement set is not invertible."""


class SingularInversion(StabilityAnalysisError):
    """A required matrix inversion is singular along the whole sweep."""


class InsufficientSamples(StabilityAnalysisError):
    """Too few samples in the requested window for the chosen refinement."""


class IllConditionedFit(StabilityAnalysisError):
    """The least-squares refinement system is numerically degenerate."""


class NonAdjacentSequence(StabilityAnalysisError):
    """Consecutive axis crossings have cyclically opposite types.

    This indicates under-sampling of the determinant trajectory; the offending
    frequency interval is attached so callers can refine and retry.
    """

    def __init__(self, omega_lo: float, omega_hi: float, kinds=None):
        self.omega_lo = omega_lo
        self.omega_hi = omega_hi
        self.kinds = kinds
        super().__init__(
            "non-adjacent crossing types between omega="
            f"{omega_lo:.6g} and {omega_hi:.6g} rad/s (trajectory under-sampled)"
        )


class InconsistentCurve(StabilityAnalysisError):
    """The crossing-sequence curve does not close to within one adjacency step."""


class NoCandidate(StabilityAnalysisError):
    """The imaginary part of the trajectory never crosses zero.

    This is a first-class outcome ("no critical zero"), not a failure of the
    pipeline: callers fall back to the qualitative verdict only.
    """


class FlatSlope(StabilityAnalysisError):
    """The local linear model of the trajectory is degenerate."""


class DegenerateNumerator(StabilityAnalysisError):
    """The composed determinant numerator is identically zero."""


class PassThroughCriticalPoint(StabilityAnalysisError):
    """An eigenvalue locus passes through the critical point itself."""


class ConsistencyViolation(StabilityAnalysisError):
    """Admittance-form and impedance-form analyses disagree."""

    def __init__(self, message: str, admittance_report=None, impedance_report=None):
        self.admittance_report = admittance_report
        self.impedance_report = impedance_report
        super().__init__(message)


class ConfigError(StabilityAnalysisError):
    """An analysis configuration file is malformed or incomplete."""
