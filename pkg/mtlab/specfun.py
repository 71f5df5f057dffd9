"""
Moser-Trudinger Lab - Special Functions
=======================================

Real Gamma, log-Gamma, digamma and trigamma for positive arguments, plus
harmonic numbers. Gamma uses the g=7 Lanczos approximation with the
recurrence below 1/2. log-Gamma switches to the zeta(k) - 1 series
around its roots at 1 and 2 so the error stays relative there. Digamma
and trigamma shift the argument upward and finish with their asymptotic
series.
"""

import math
from dataclasses import dataclass
from numbers import Integral

import numpy as np

from .errors import DomainViolation, EvaluationOverflow

EULER_GAMMA = 0.57721566490153286061

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)

# largest argument with a finite double Gamma value
GAMMA_ARG_MAX = 171.6243769563027
_FACTORIAL_MAX = 171

# below this the asymptotic series is not used directly
_ASYMPTOTIC_SHIFT = 10.0


@dataclass(frozen=True)
class SpecFunPrecision:
    """Accuracy controls for series evaluation"""

    rel_tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self):
        self._validate()

    def _validate(self):
        if not self.rel_tol > 0:
            raise DomainViolation(f"rel_tol must be positive: {self.rel_tol}")
        if self.max_terms < 100:
            raise DomainViolation(f"max_terms must be at least 100: {self.max_terms}")


DEFAULT_PRECISION = SpecFunPrecision()


def _require_positive(t: float, name: str) -> float:
    t = float(t)
    if not math.isfinite(t) or t <= 0:
        raise DomainViolation(f"{name} requires a finite argument t > 0, got {t!r}")
    return t


def _is_small_integer(t: float) -> bool:
    return t.is_integer() and t <= _FACTORIAL_MAX


def _lanczos_series(z: float) -> float:
    x = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        x += c / (z + i)
    return x


def gamma(t: float) -> float:
    """Gamma function for t > 0, exact at integers up to 171."""
    t = _require_positive(t, "gamma")
    if _is_small_integer(t):
        return float(math.factorial(int(t) - 1))
    if t > GAMMA_ARG_MAX:
        raise EvaluationOverflow(f"gamma({t}) exceeds the double range", argument=t)
    if t < 0.5:
        value = gamma(t + 1.0) / t
        if not math.isfinite(value):
            raise EvaluationOverflow(f"gamma({t}) exceeds the double range", argument=t)
        return value

    z = t - 1.0
    tt = z + _LANCZOS_G + 0.5
    # split the power so tt**(z + 0.5) never overflows on its own
    half_power = tt ** ((z + 0.5) / 2.0)
    return _SQRT_TWO_PI * half_power * math.exp(-tt) * half_power * _lanczos_series(z)


_ZETA_CUT = 10
_BERNOULLI_EVEN = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0)


def _zeta_minus_one(k: int) -> float:
    """zeta(k) - 1 for integer k >= 2, Euler-Maclaurin past n = _ZETA_CUT"""
    m = _ZETA_CUT
    head = math.fsum(n ** -float(k) for n in range(m - 1, 1, -1))
    tail = m ** (1.0 - k) / (k - 1) + 0.5 * m ** -float(k)
    rising = float(k)
    for j, b in enumerate(_BERNOULLI_EVEN, start=1):
        # rising = k (k+1) ... (k+2j-2)
        tail += b / math.factorial(2 * j) * rising * m ** (1.0 - k - 2.0 * j)
        rising *= (k + 2 * j - 1) * (k + 2 * j)
    return head + tail


# (-1)^k (zeta(k) - 1) / k for k = 2, 3, ...; terms decay like 2^-k
_LOG_GAMMA_SERIES = tuple((-1) ** k * _zeta_minus_one(k) / k for k in range(2, 42))
_SERIES_RADIUS = 0.5


def _log_gamma_two_plus(x: float) -> float:
    """log Gamma(2 + x) for |x| <= 1/2, relative accuracy kept at x -> 0"""
    total = 0.0
    for c in reversed(_LOG_GAMMA_SERIES):
        total = total * x + c
    return x * (1.0 - EULER_GAMMA) + x * x * total


def log_gamma1p(x: float) -> float:
    """log Gamma(1 + x) for x > -1 without forming 1 + x near the root at x = 0."""
    x = float(x)
    if not math.isfinite(x) or x <= -1.0:
        raise DomainViolation(f"log_gamma1p requires a finite argument x > -1, got {x!r}")
    if abs(x) <= _SERIES_RADIUS:
        return _log_gamma_two_plus(x) - math.log1p(x)
    if 0.0 < x < 1.0 + _SERIES_RADIUS:
        # x - 1 is exact here, 1 + x is not
        return _log_gamma_two_plus(x - 1.0)
    return log_gamma(1.0 + x)


def log_gamma(t: float) -> float:
    """
    Natural log of Gamma for t > 0.

    On [1/2, 5/2) the zeta series is used, which keeps the error relative
    at the roots t = 1 and t = 2. Lanczos covers everything above.
    """
    t = _require_positive(t, "log_gamma")
    if _is_small_integer(t):
        return math.log(math.factorial(int(t) - 1))
    if t < 0.5:
        return log_gamma(t + 1.0) - math.log(t)
    if t < 1.0 + _SERIES_RADIUS:
        return log_gamma1p(t - 1.0)
    if t < 2.0 + _SERIES_RADIUS:
        return _log_gamma_two_plus(t - 2.0)

    z = t - 1.0
    tt = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * math.log(tt) - tt + math.log(_lanczos_series(z))


def digamma(t: float) -> float:
    """Logarithmic derivative of Gamma for t > 0."""
    x = _require_positive(t, "digamma")
    value = 0.0
    while x < _ASYMPTOTIC_SHIFT:
        value -= 1.0 / x
        x += 1.0

    r = 1.0 / x
    value += math.log(x) - 0.5 * r
    r2 = r * r
    value -= r2 * (1.0 / 12.0
                   - r2 * (1.0 / 120.0
                           - r2 * (1.0 / 252.0
                                   - r2 * (1.0 / 240.0
                                           - r2 / 132.0))))
    return value


def digamma_series(t: float, precision: SpecFunPrecision = DEFAULT_PRECISION) -> float:
    """
    Digamma from -gamma + sum_j (1/j - 1/(t-1+j)).

    Slow reference evaluation: the sum is truncated at precision.max_terms and
    the remainder replaced by its integral estimate.
    """
    t = _require_positive(t, "digamma_series")
    m = precision.max_terms
    j = np.arange(1, m + 1, dtype=float)
    partial = float(np.sum(1.0 / j - 1.0 / (t - 1.0 + j)))
    tail = math.log((m + 0.5 + t - 1.0) / (m + 0.5))
    return -EULER_GAMMA + partial + tail


def trigamma(t: float) -> float:
    """Derivative of digamma for t > 0."""
    x = _require_positive(t, "trigamma")
    value = 0.0
    while x < _ASYMPTOTIC_SHIFT:
        value += 1.0 / (x * x)
        x += 1.0

    r = 1.0 / x
    r2 = r * r
    value += r + 0.5 * r2 + r * r2 * (1.0 / 6.0
                                      - r2 * (1.0 / 30.0
                                              - r2 * (1.0 / 42.0
                                                      - r2 * (1.0 / 30.0
                                                              - r2 * 5.0 / 66.0))))
    return value


def harmonic(m: int) -> float:
    """H_m = 1 + 1/2 + ... + 1/m, with H_0 = 0."""
    if isinstance(m, bool) or not isinstance(m, Integral):
        raise DomainViolation(f"harmonic requires an integer, got {m!r}")
    if m < 0:
        raise DomainViolation(f"harmonic requires m >= 0, got {m}")
    return math.fsum(1.0 / k for k in range(1, int(m) + 1))
