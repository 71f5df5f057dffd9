"""
Moser-Trudinger Lab - Trend Checks
==================================

Finite surrogates for limit statements: a gap sequence is accepted when it
decreases step by step, allowing a fixed number of non-monotone steps.
Empirical convergence orders and ratios are reported, never asserted.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# one step may be perturbed by quadrature error
ALLOWED_VIOLATIONS = 1


@dataclass(frozen=True)
class TrendVerdict:
    passed: bool
    violations: int
    steps: int

    def describe(self) -> str:
        return f"{self.steps - self.violations}/{self.steps} decreasing steps"


def decreasing_trend(gaps: Sequence[float], allowed_violations: int = ALLOWED_VIOLATIONS) -> TrendVerdict:
    """
    Each step must strictly decrease the gap or land on exactly zero.

    Fewer than two points pass trivially; a non-finite gap is a violation.
    """
    gaps = [float(g) for g in gaps]
    violations = 0
    for before, after in zip(gaps[:-1], gaps[1:]):
        if not (math.isfinite(before) and math.isfinite(after)):
            violations += 1
        elif not (after < before or after == 0.0):
            violations += 1
    steps = max(len(gaps) - 1, 0)
    return TrendVerdict(violations <= allowed_violations, violations, steps)


def empirical_orders(parameters: Sequence[float], gaps: Sequence[float]) -> list[float]:
    """Log-log slopes of consecutive (parameter, gap) points; NaN where undefined"""
    orders = []
    for (x0, g0), (x1, g1) in zip(zip(parameters, gaps), zip(parameters[1:], gaps[1:])):
        if min(x0, x1, g0, g1) <= 0 or x0 == x1:
            orders.append(math.nan)
        else:
            orders.append(math.log(g1 / g0) / math.log(x1 / x0))
    return orders


def convergence_ratios(values: Sequence[float]) -> np.ndarray:
    """(v[i-1] - v[i-2]) / (v[i] - v[i-1]) for i >= 2; inf where the last step is zero"""
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        return np.empty(0)
    numerator = values[1:-1] - values[:-2]
    denominator = values[2:] - values[1:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(denominator == 0.0, np.inf, numerator / denominator)
    return ratios


def aitken_limit(values: Sequence[float]) -> float:
    """Extrapolated limit from the last three values; NaN when the ratio is unusable"""
    ratios = convergence_ratios(values)
    if ratios.size == 0:
        return math.nan
    last = float(ratios[-1])
    if not math.isfinite(last) or math.isclose(last, 1.0):
        return math.nan
    v = np.asarray(values, dtype=float)
    return float(v[-1] + (v[-1] - v[-2]) / (last - 1.0))
