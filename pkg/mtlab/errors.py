"""
Moser-Trudinger Lab - Error Types
=================================

Exception hierarchy shared by every computational module. Each error is also
an instance of the matching builtin so callers may catch either.
"""

from typing import Any, Optional


class LabError(Exception):
    """Base class for all lab errors"""

    # rows an experiment completed before the failure (an ExperimentReport)
    partial: Optional[Any] = None


class DomainViolation(LabError, ValueError):
    """Argument outside the mathematical domain of an operation"""


class PreconditionViolation(LabError, ValueError):
    """Operation requires a hypothesis the inputs do not satisfy"""


class EvaluationOverflow(LabError, OverflowError):
    """Result exceeds the double precision range"""

    def __init__(self, message: str, argument: Any = None, radius: Optional[float] = None):
        super().__init__(message)
        self.argument = argument
        self.radius = radius


class QuadratureFailure(LabError, ArithmeticError):
    """Quadrature produced a non-finite or otherwise unusable value"""

    def __init__(self, message: str, radius: Optional[float] = None):
        super().__init__(message)
        self.radius = radius


class DegenerateProfile(LabError, ValueError):
    """Profile has zero gradient norm where a normalization is required"""
