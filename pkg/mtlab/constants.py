"""
Moser-Trudinger Lab - Closed-Form Constants
===========================================

Exponent bookkeeping for a dimension N and exponent p, together with every
closed-form scalar of the W^{1,p} approximation: ball volume, surface
measure, the critical constants alpha_N and alpha_p, the sharp Sobolev
constant, the concentration level M_p in both of its forms and its
Carleson-Chang limit.

Powers whose exponent diverges as p -> N are evaluated as exp(gamma * log x).
"""

import math
from dataclasses import dataclass, field
from numbers import Integral
from typing import Optional

from .errors import DomainViolation, EvaluationOverflow, PreconditionViolation
from .specfun import harmonic, log_gamma, log_gamma1p, trigamma

# exp() of anything larger is not a finite double
LOG_DOUBLE_MAX = math.log(1.7976931348623157e308)


def _require_dimension(N: int, minimum: int) -> int:
    if isinstance(N, bool) or not isinstance(N, Integral):
        raise DomainViolation(f"dimension must be an integer, got {N!r}")
    if N < minimum:
        raise DomainViolation(f"dimension must be >= {minimum}, got {N}")
    return int(N)


@dataclass(frozen=True)
class ExponentPair:
    """Dimension N >= 2 and exponent 1 < p < N with all derived exponents"""

    N: int
    p: float
    p_star: float = field(init=False)
    p_conj: float = field(init=False)
    gamma_exp: float = field(init=False)
    prop21_valid: bool = field(init=False)

    def __post_init__(self):
        N = _require_dimension(self.N, 2)
        p = float(self.p)
        if not math.isfinite(p) or not 1.0 < p < N:
            raise DomainViolation(f"exponent must satisfy 1 < p < N = {N}, got p = {self.p!r}")

        object.__setattr__(self, "N", N)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "p_star", N * p / (N - p))
        object.__setattr__(self, "p_conj", p / (p - 1.0))
        object.__setattr__(self, "gamma_exp", N * (p - 1.0) / (N - p))
        object.__setattr__(self, "prop21_valid", p > 2.0 * N / (N + 1.0))

    @property
    def t(self) -> float:
        """(N - p) / p, the variable in which M_p tends to its limit"""
        return (self.N - self.p) / self.p

    @property
    def concentration_threshold(self) -> float:
        return 2.0 * self.N / (self.N + 1.0)

    def require_concentration_regime(self, operation: str):
        if not self.prop21_valid:
            raise PreconditionViolation(
                f"{operation} requires p > 2N/(N+1) = {self.concentration_threshold:.12g}, "
                f"got N = {self.N}, p = {self.p!r}"
            )


def ball_volume(N: int) -> float:
    """|B| = pi^{N/2} / Gamma(1 + N/2)"""
    N = _require_dimension(N, 1)
    return math.exp(0.5 * N * math.log(math.pi) - log_gamma(1.0 + 0.5 * N))


def surface_measure(N: int) -> float:
    """omega_{N-1} = N |B|"""
    N = _require_dimension(N, 1)
    return N * ball_volume(N)


def alpha_n(N: int) -> float:
    """alpha_N = N omega_{N-1}^{1/(N-1)}"""
    N = _require_dimension(N, 2)
    return N * surface_measure(N) ** (1.0 / (N - 1))


def log_alpha_p(pair: ExponentPair) -> float:
    N, p = pair.N, pair.p
    inner = (N - 1.0) / N * math.log(alpha_n(N)) + (1.0 / p - 1.0 / N) * math.log(ball_volume(N))
    return pair.p_conj * inner


def alpha_p(pair: ExponentPair) -> float:
    """alpha_p = (alpha_N^{(N-1)/N} |B|^{1/p - 1/N})^{p/(p-1)}"""
    return _checked_exp(log_alpha_p(pair), "alpha_p", pair)


def log_sobolev_constant(pair: ExponentPair) -> float:
    N, p = pair.N, pair.p
    gamma_part = (log_gamma(N / p) + log_gamma(N + 1.0 - N / p)
                  - log_gamma(float(N)) - log_gamma(1.0 + 0.5 * N))
    value = (0.5 * math.log(math.pi)
             + math.log(N) / p
             + (p - 1.0) / p * math.log((N - p) / (p - 1.0))
             + gamma_part / N)
    if not math.isfinite(value):
        raise EvaluationOverflow(f"log S_p is not finite for N = {N}, p = {p!r}", argument=pair)
    return value


def sobolev_constant(pair: ExponentPair) -> float:
    """Sharp constant S_p of ||u||_{p*} <= S_p^{-1} ||grad u||_p"""
    return _checked_exp(log_sobolev_constant(pair), "S_p", pair)


def log_coef(pair: ExponentPair) -> float:
    """log of ((N-p)/(N(p-1))) alpha_p"""
    return -math.log(pair.gamma_exp) + log_alpha_p(pair)


# below this t = (N-p)/p the shifted Gamma sum is taken term by term
_SHIFT_SERIES_T_MAX = 0.5


def log_gamma_shift(N: int, t: float) -> float:
    """
    log Gamma(1+t) + log Gamma(N-t) - log Gamma(N) for integer N and 0 < t < N-1.

    For small t the recurrence Gamma(N-t) = Gamma(1-t) prod_j (j-t) turns this
    into log Gamma(1+t) + log Gamma(1-t) + sum_j log(1 - t/j), a sum of terms
    each of order t, so the result keeps its relative accuracy as t -> 0.
    """
    if t >= _SHIFT_SERIES_T_MAX:
        return log_gamma(1.0 + t) + log_gamma(N - t) - log_gamma(float(N))
    shift = math.fsum(math.log1p(-t / j) for j in range(1, N))
    return log_gamma1p(t) + log_gamma1p(-t) + shift


def log_concentration_excess(pair: ExponentPair) -> float:
    """
    log of coef^gamma S_p^{-p*}, the part of M_p above |B|.

    The logarithms of coef^gamma and S_p^{p*} both grow like 1/(N-p) and their
    divergent parts cancel in closed form. What remains is N/(N-p) times

        (N-p) (log(pi)/2 - log Gamma(1+N/2)/N) - (p/N) log_gamma_shift(N, t)

    which is of order N-p and has no cancellation left.
    """
    N, p = pair.N, pair.p
    d = N - p
    residual = (d * (0.5 * math.log(math.pi) - log_gamma(1.0 + 0.5 * N) / N)
                - p / N * log_gamma_shift(N, pair.t))
    return N * residual / d


def concentration_level(pair: ExponentPair) -> float:
    """M_p = |B| + coef^gamma S_p^{-p*}"""
    pair.require_concentration_regime("concentration_level")
    return ball_volume(pair.N) + _checked_exp(log_concentration_excess(pair), "M_p", pair)


def gamma_ratio_log(pair: ExponentPair) -> float:
    """log of Gamma(N) / (Gamma(N/p) Gamma(N+1-N/p)), with N/p = 1 + t"""
    return -log_gamma_shift(pair.N, pair.t)


def gamma_ratio_exponent(pair: ExponentPair) -> float:
    """gamma_ratio_log / t; tends to H_{N-1} as p -> N"""
    return gamma_ratio_log(pair) / pair.t


def concentration_level_gamma_form(pair: ExponentPair) -> float:
    """M_p = |B| + |B| [Gamma(N) / (Gamma(N/p) Gamma(N+1-N/p))]^{p/(N-p)}"""
    pair.require_concentration_regime("concentration_level_gamma_form")
    vol = ball_volume(pair.N)
    return vol + vol * _checked_exp(gamma_ratio_exponent(pair), "M_p", pair)


def carleson_chang_limit(N: int) -> float:
    """CC(N) = |B| (1 + exp(H_{N-1}))"""
    N = _require_dimension(N, 2)
    return ball_volume(N) * (1.0 + math.exp(harmonic(N - 1)))


def mp_gap_bound(pair: ExponentPair) -> float:
    """
    Rigorous bound CC(N) (pi^2/6) t on CC(N) - M_p.

    t -> -log Gamma(1+t) - log Gamma(N-t) is concave with second derivative
    bounded by pi^2/3 in absolute value, so the Gamma-ratio exponent stays
    within (pi^2/6) t of H_{N-1}.
    """
    return carleson_chang_limit(pair.N) * (math.pi ** 2 / 6.0) * pair.t


def mp_leading_gap(pair: ExponentPair) -> float:
    """First-order prediction |B| e^{H_{N-1}} (t/2)(psi'(1) + psi'(N)) of CC(N) - M_p"""
    N = pair.N
    return (ball_volume(N) * math.exp(harmonic(N - 1))
            * 0.5 * pair.t * (trigamma(1.0) + trigamma(float(N))))


def _checked_exp(log_value: float, name: str, pair: ExponentPair) -> float:
    if not math.isfinite(log_value) or log_value > LOG_DOUBLE_MAX:
        raise EvaluationOverflow(
            f"{name} overflows for N = {pair.N}, p = {pair.p!r} (log value {log_value!r})",
            argument=pair,
        )
    return math.exp(log_value)


@dataclass(frozen=True)
class PaperConstants:
    """All closed-form scalars for one exponent pair"""

    pair: ExponentPair
    vol_B: float
    omega: float
    alpha_N: float
    alpha_p: float
    coef: float
    log_leading: float
    S_p: float
    M_p: Optional[float]
    M_p_gamma_form: Optional[float]
    cc_limit: float

    @property
    def leading(self) -> float:
        """coef^gamma; underflows to 0 very close to p = N"""
        return math.exp(self.log_leading) if self.log_leading <= LOG_DOUBLE_MAX else math.inf

    @classmethod
    def for_pair(cls, pair: ExponentPair) -> 'PaperConstants':
        lc = log_coef(pair)
        return cls(
            pair=pair,
            vol_B=ball_volume(pair.N),
            omega=surface_measure(pair.N),
            alpha_N=alpha_n(pair.N),
            alpha_p=alpha_p(pair),
            coef=math.exp(lc),
            log_leading=pair.gamma_exp * lc,
            S_p=sobolev_constant(pair),
            M_p=concentration_level(pair) if pair.prop21_valid else None,
            M_p_gamma_form=concentration_level_gamma_form(pair) if pair.prop21_valid else None,
            cc_limit=carleson_chang_limit(pair.N),
        )

    def as_row(self) -> dict:
        pair = self.pair
        return {
            "N": pair.N,
            "p": pair.p,
            "p_star": pair.p_star,
            "p_conj": pair.p_conj,
            "gamma_exp": pair.gamma_exp,
            "vol_B": self.vol_B,
            "omega": self.omega,
            "alpha_N": self.alpha_N,
            "alpha_p": self.alpha_p,
            "S_p": self.S_p,
            "M_p": self.M_p,
            "M_p_gamma_form": self.M_p_gamma_form,
            "cc_limit": self.cc_limit,
            "prop21_valid": pair.prop21_valid,
        }


def paper_constants(pair: ExponentPair) -> PaperConstants:
    return PaperConstants.for_pair(pair)
