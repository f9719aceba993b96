"""Predefined-time scalar controllers: laws, closed forms, simulation and checks."""

__version__ = "0.1.0"

from .analysis import (
    BoundScanRow,
    PeakReport,
    VelocityCheck,
    find_peak,
    golden_section_max,
    initial_bound_scan,
    peak_growth_curve,
    velocity_lower_bound_check,
)
from .derivatives import (
    DerivativeProfile,
    SingularityVerdict,
    classify_singularity,
    derivative_profile,
    kth_derivative,
    min_gain_for_dimension,
)
from .exceptions import DomainError, InconclusiveError, IntegrationError, ScenarioError
from .integrator import IntegrationSettings, Trajectory, integrate, solution_error
from .laws import (
    FixedTimeParams,
    Horizon,
    IntegrationConstant,
    PredefParams,
    closed_form_state,
    eval_corrected_law,
    eval_fixed_time_law,
    eval_original_law,
    integration_constant,
)

__all__ = [
    "BoundScanRow",
    "DerivativeProfile",
    "DomainError",
    "FixedTimeParams",
    "Horizon",
    "InconclusiveError",
    "IntegrationConstant",
    "IntegrationError",
    "IntegrationSettings",
    "PeakReport",
    "PredefParams",
    "ScenarioError",
    "SingularityVerdict",
    "Trajectory",
    "VelocityCheck",
    "classify_singularity",
    "closed_form_state",
    "derivative_profile",
    "eval_corrected_law",
    "eval_fixed_time_law",
    "eval_original_law",
    "find_peak",
    "golden_section_max",
    "initial_bound_scan",
    "integrate",
    "integration_constant",
    "kth_derivative",
    "min_gain_for_dimension",
    "peak_growth_curve",
    "solution_error",
    "velocity_lower_bound_check",
]
