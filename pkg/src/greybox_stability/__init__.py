"""Stability assessment of grey-box 2x2 MIMO feedback systems.

The qualitative verdict comes from axis crossings of the return-difference
determinant trajectory (winding count); the quantitative one from a local
linear model around the dominant crossing (critical-pole estimate).  Both are
cross-checked against a generalized Nyquist reference and an exact
rational-composition oracle.
"""

from .analysis import AnalysisOutcome, analyze_table, analyze_trajectory
from .critical_pole import (
    CriticalPoleEstimate,
    critical_pole_from_crossing,
    estimate_critical_pole,
    estimate_from_trajectory,
    find_candidate_frequency,
    local_slope,
)
from .idta import IdtaCurve, IdtaPoint, StabilityVerdict, assess, build_idta, stable_region
from .kernels import BACKEND as KERNEL_BACKEND
from .models import (
    ComplexMat2,
    GridParams,
    RationalFunction,
    RationalMatrix2,
    SelfStabilityReport,
    check_self_stable,
    eval_rational,
    eval_rational_matrix,
    grid_impedance,
    hz_to_rad,
    rad_to_hz,
)
from .sweep import (
    DEFAULT_PLAN,
    FrequencyPlan,
    FrequencyResponseTable,
    MeasurementSet,
    estimate_admittance,
    perturb_and_measure,
    plan_frequencies,
    sweep,
    table_from_model,
)
from .trajectory import (
    Crossing,
    CrossingKind,
    DeterminantTrajectory,
    detect_crossings,
    determinant_impedance_form,
    interpolate,
    return_difference_determinant,
)
from .verify import (
    ConsistencyReport,
    EigenLoci,
    OracleReport,
    consistency_check,
    eigen_loci,
    gnc_verdict,
    oracle_rhp_zeros,
    performance_comparison,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisOutcome",
    "ComplexMat2",
    "ConsistencyReport",
    "CriticalPoleEstimate",
    "Crossing",
    "CrossingKind",
    "DEFAULT_PLAN",
    "DeterminantTrajectory",
    "EigenLoci",
    "FrequencyPlan",
    "FrequencyResponseTable",
    "GridParams",
    "IdtaCurve",
    "IdtaPoint",
    "KERNEL_BACKEND",
    "MeasurementSet",
    "OracleReport",
    "RationalFunction",
    "RationalMatrix2",
    "SelfStabilityReport",
    "StabilityVerdict",
    "analyze_table",
    "analyze_trajectory",
    "assess",
    "build_idta",
    "check_self_stable",
    "consistency_check",
    "critical_pole_from_crossing",
    "detect_crossings",
    "determinant_impedance_form",
    "eigen_loci",
    "estimate_admittance",
    "estimate_critical_pole",
    "estimate_from_trajectory",
    "eval_rational",
    "eval_rational_matrix",
    "find_candidate_frequency",
    "gnc_verdict",
    "grid_impedance",
    "hz_to_rad",
    "interpolate",
    "local_slope",
    "oracle_rhp_zeros",
    "performance_comparison",
    "perturb_and_measure",
    "plan_frequencies",
    "rad_to_hz",
    "return_difference_determinant",
    "stable_region",
    "sweep",
    "table_from_model",
]
