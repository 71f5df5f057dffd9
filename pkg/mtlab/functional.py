"""
Moser-Trudinger Lab - Pointwise Functionals
===========================================

F_p(s) = [1 + coef |s|^{p/(p-1)}]^gamma, its q-exponential form, the
Moser-Trudinger integrand exp(alpha_N |s|^{N/(N-1)}), the correction H of
the two-sided estimate, and the elementary power inequality behind it.

Every pointwise operation accepts a scalar or a numpy array and is
evaluated in log space; a value beyond the double range raises
EvaluationOverflow naming the offending argument instead of returning inf.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .constants import LOG_DOUBLE_MAX, ExponentPair, PaperConstants, alpha_n
from .errors import DomainViolation, EvaluationOverflow

ArrayLike = Union[float, np.ndarray]


def _abs_log(s: ArrayLike) -> np.ndarray:
    a = np.abs(np.asarray(s, dtype=float))
    if not np.all(np.isfinite(a)):
        bad = np.asarray(s, dtype=float).ravel()[np.argmin(np.isfinite(a).ravel())]
        raise DomainViolation(f"argument must be finite, got {bad!r}")
    with np.errstate(divide="ignore"):
        return np.log(a)


def _shape_like(s: ArrayLike, values: np.ndarray) -> ArrayLike:
    return float(values) if np.ndim(s) == 0 else values


def exp_checked(log_values: np.ndarray, arguments: ArrayLike, name: str) -> np.ndarray:
    """exp() that reports the first argument whose value leaves the double range"""
    log_values = np.asarray(log_values, dtype=float)
    over = log_values > LOG_DOUBLE_MAX
    if np.any(over):
        index = int(np.argmax(over.ravel()))
        argument = float(np.asarray(arguments, dtype=float).ravel()[index])
        raise EvaluationOverflow(
            f"{name} overflows at s = {argument!r} (log value {log_values.ravel()[index]:.6g})",
            argument=argument,
        )
    return np.exp(log_values)


@dataclass(frozen=True)
class FpEvaluator:
    """F_p and its companions for one exponent pair; immutable after construction"""

    pair: ExponentPair
    consts: PaperConstants
    coef: float
    gamma_exp: float
    log_coef: float
    log_leading: float
    log_C1: float
    log_C2: float

    @classmethod
    def for_pair(cls, pair: ExponentPair) -> 'FpEvaluator':
        consts = PaperConstants.for_pair(pair)
        g = pair.gamma_exp
        lc = math.log(consts.coef)
        # (1 + b)^g <= 1 + b^g + g 2^{g-1} (b^{g-1} + b) with b = coef |s|^{p'}
        log_front = math.log(g) + (g - 1.0) * math.log(2.0)
        return cls(
            pair=pair,
            consts=consts,
            coef=consts.coef,
            gamma_exp=g,
            log_coef=lc,
            log_leading=consts.log_leading,
            log_C1=log_front + lc,
            log_C2=log_front + (g - 1.0) * lc,
        )

    @property
    def leading(self) -> float:
        return self.consts.leading

    @property
    def C1(self) -> float:
        return math.exp(self.log_C1)

    @property
    def C2(self) -> float:
        return math.exp(self.log_C2)

    @property
    def q_index(self) -> float:
        """q with F_p(s) = exp_q(alpha_p |s|^{p'})"""
        return 1.0 - 1.0 / self.gamma_exp

    # -- F_p -----------------------------------------------------------------

    def log_f_p(self, s: ArrayLike) -> ArrayLike:
        log_a = _abs_log(s)
        with np.errstate(invalid="ignore"):
            inner = np.logaddexp(0.0, self.log_coef + self.pair.p_conj * log_a)
        return _shape_like(s, self.gamma_exp * inner)

    def f_p(self, s: ArrayLike) -> ArrayLike:
        values = exp_checked(self.log_f_p(s), s, "F_p")
        return _shape_like(s, values)

    def log_power_part(self, s: ArrayLike) -> ArrayLike:
        """log of leading |s|^{p*}"""
        return _shape_like(s, self.log_leading + self.pair.p_star * _abs_log(s))

    def t_remainder(self, s: ArrayLike) -> ArrayLike:
        """T_p(s) = F_p(s) - leading |s|^{p*}, which lies in [1, 1 + H(s)]"""
        f = np.asarray(self.f_p(s), dtype=float)
        power = exp_checked(self.log_power_part(s), s, "leading |s|^p*")
        return _shape_like(s, f - power)

    # -- correction term -------------------------------------------------------

    def log_h_correction(self, s: ArrayLike) -> ArrayLike:
        self.pair.require_concentration_regime("h_correction")
        log_a = _abs_log(s)
        pair = self.pair
        first = self.log_C1 + pair.p_conj * log_a
        second = self.log_C2 + (pair.p_star - pair.p_conj) * log_a
        with np.errstate(invalid="ignore"):
            return _shape_like(s, np.logaddexp(first, second))

    def h_correction(self, s: ArrayLike) -> ArrayLike:
        """H(s) = C1 |s|^{p'} + C2 |s|^{p* - p'}"""
        values = exp_checked(self.log_h_correction(s), s, "H")
        return _shape_like(s, values)

    def sandwich(self, s: ArrayLike) -> tuple:
        """(lower, value, upper) of 1 + leading|s|^{p*} <= F_p(s) <= lower + H(s)"""
        lower = 1.0 + np.asarray(exp_checked(self.log_power_part(s), s, "leading |s|^p*"))
        upper = lower + np.asarray(self.h_correction(s))
        return _shape_like(s, lower), self.f_p(s), _shape_like(s, upper)

    # -- rescaled functional ---------------------------------------------------

    def log_rescaled(self, s: ArrayLike) -> ArrayLike:
        """
        log of [1 + coef_N |s|^{p'}]^gamma with alpha_p replaced by
        alpha_N^{p(N-1)/(N(p-1))}; equals log F_p(s |B|^{1/N - 1/p}).
        """
        pair = self.pair
        log_rescaled_coef = (-math.log(self.gamma_exp)
                             + pair.p_conj * (pair.N - 1.0) / pair.N * math.log(self.consts.alpha_N))
        log_a = _abs_log(s)
        with np.errstate(invalid="ignore"):
            inner = np.logaddexp(0.0, log_rescaled_coef + pair.p_conj * log_a)
        return _shape_like(s, self.gamma_exp * inner)

    def rescaled_integrand(self, s: ArrayLike) -> ArrayLike:
        values = exp_checked(self.log_rescaled(s), s, "rescaled F_p")
        return _shape_like(s, values)


def log_mt_integrand(s: ArrayLike, N: int) -> ArrayLike:
    log_a = _abs_log(s)
    with np.errstate(invalid="ignore"):
        values = alpha_n(N) * np.exp(N / (N - 1.0) * log_a)
    return _shape_like(s, values)


def mt_integrand(s: ArrayLike, N: int) -> ArrayLike:
    """exp(alpha_N |s|^{N/(N-1)})"""
    values = exp_checked(log_mt_integrand(s, N), s, "exp(alpha_N |s|^{N/(N-1)})")
    return _shape_like(s, values)


def q_exp(q: float, r: ArrayLike) -> ArrayLike:
    """Tsallis q-exponential [1 + (1-q) r]^{1/(1-q)}"""
    q = float(q)
    if not math.isfinite(q) or q == 1.0:
        raise DomainViolation(f"q_exp requires a finite q != 1, got {q!r}")
    r_arr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(r_arr)) or np.any(r_arr < 0):
        raise DomainViolation("q_exp requires finite r >= 0")
    base = (1.0 - q) * r_arr
    if np.any(base <= -1.0):
        bad = float(r_arr.ravel()[np.argmax((base <= -1.0).ravel())])
        raise DomainViolation(f"q_exp requires 1 + (1-q) r > 0, got q = {q!r}, r = {bad!r}")
    values = exp_checked(np.log1p(base) / (1.0 - q), r, "q_exp")
    return _shape_like(r, values)


def elementary_power_bounds(a: float, b: float, g: float) -> tuple[float, float]:
    """
    (a^g + b^g, a^g + b^g + g 2^{g-1} (a b^{g-1} + a^{g-1} b)), which bracket
    (a + b)^g for a, b > 0 and g > 1.
    """
    a, b, g = float(a), float(b), float(g)
    if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(g)):
        raise DomainViolation(f"elementary_power_bounds requires finite inputs, got {(a, b, g)!r}")
    if a <= 0 or b <= 0 or g <= 1:
        raise DomainViolation(f"elementary_power_bounds requires a, b > 0 and g > 1, got {(a, b, g)!r}")
    lower = a ** g + b ** g
    upper = lower + g * 2.0 ** (g - 1.0) * (a * b ** (g - 1.0) + a ** (g - 1.0) * b)
    return lower, upper
