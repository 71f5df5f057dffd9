"""
Moser-Trudinger Lab
===================

Numerical experiments on the W^{1,p} approximation of the Moser-Trudinger
inequality as p -> N.
"""

from .constants import ExponentPair, PaperConstants, carleson_chang_limit, concentration_level, paper_constants
from .errors import (
    DegenerateProfile,
    DomainViolation,
    EvaluationOverflow,
    LabError,
    PreconditionViolation,
    QuadratureFailure,
)
from .experiments import (
    pointwise_limit_study,
    semicontinuity_study,
    sweep_concentration,
    sweep_mp_limit,
    two_bubble_study,
    verify_suite,
)
from .functional import FpEvaluator
from .maximizer import MaximizerConfig, maximize, mesh_stability
from .radial import QuadratureSpec, RadialProfile
from .reports import ExperimentReport

__version__ = "1.0.0"

__all__ = [
    "DegenerateProfile",
    "DomainViolation",
    "EvaluationOverflow",
    "ExperimentReport",
    "ExponentPair",
    "FpEvaluator",
    "LabError",
    "MaximizerConfig",
    "PaperConstants",
    "PreconditionViolation",
    "QuadratureFailure",
    "QuadratureSpec",
    "RadialProfile",
    "carleson_chang_limit",
    "concentration_level",
    "maximize",
    "mesh_stability",
    "paper_constants",
    "pointwise_limit_study",
    "semicontinuity_study",
    "sweep_concentration",
    "sweep_mp_limit",
    "two_bubble_study",
    "verify_suite",
]
