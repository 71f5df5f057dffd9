"""
Moser-Trudinger Lab - Profile Families
======================================

Explicit radial families on the unit ball:

- the Aubin-Talenti bubble U(x) = (1 + |x|^{p/(p-1)})^{-(N-p)/p} and its
  boundary-corrected, gradient-normalized rescaling W_eps,
- the truncated-logarithm Moser profile normalized in W^{1,N},
- the two-bubble sequence C_n (phi(x) + n^{(N-p)/p} psi(n x)).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import ExponentPair, ball_volume, surface_measure
from .errors import DomainViolation, PreconditionViolation, QuadratureFailure
from .radial import QuadratureSpec, RadialProfile, ball_integral, grad_p_norm
from .specfun import gamma

logger = logging.getLogger(__name__)

# tolerance on the half-energy hypothesis of the two-bubble construction
HALF_ENERGY_TOL = 1e-8


@dataclass(frozen=True)
class AubinTalenti:
    """
    Bubble eps^{-(N-p)/p} U(r/eps).

    epsilon = 1 gives U itself; all evaluation is in log space so that
    large r/eps never overflows.
    """

    pair: ExponentPair
    epsilon: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise DomainViolation(f"epsilon must be positive, got {self.epsilon!r}")

    @property
    def height(self) -> float:
        """eps^{-(N-p)/p}"""
        pair = self.pair
        return self.epsilon ** (-(pair.N - pair.p) / pair.p)

    def base_value(self, x: np.ndarray) -> np.ndarray:
        """U(x)"""
        pair = self.pair
        with np.errstate(divide="ignore"):
            log_x = np.log(np.asarray(x, dtype=float))
        return np.exp(-(pair.N - pair.p) / pair.p * np.logaddexp(0.0, pair.p_conj * log_x))

    def base_derivative(self, x: np.ndarray) -> np.ndarray:
        """U'(x) = -((N-p)/(p-1)) x^{1/(p-1)} (1 + x^{p'})^{-N/p}"""
        pair = self.pair
        N, p = pair.N, pair.p
        with np.errstate(divide="ignore"):
            log_x = np.log(np.asarray(x, dtype=float))
        log_mag = log_x / (p - 1.0) - N / p * np.logaddexp(0.0, pair.p_conj * log_x)
        return -(N - p) / (p - 1.0) * np.exp(log_mag)

    def value(self, r: np.ndarray) -> np.ndarray:
        return self.height * self.base_value(np.asarray(r, dtype=float) / self.epsilon)

    def derivative(self, r: np.ndarray) -> np.ndarray:
        return self.height / self.epsilon * self.base_derivative(np.asarray(r, dtype=float) / self.epsilon)

    @property
    def tail(self) -> float:
        """eps^{-(N-p)/p} U(1/eps), the boundary value removed from W_eps"""
        return float(self.value(np.array([1.0]))[0])


def aubin_talenti(pair: ExponentPair) -> AubinTalenti:
    """U and U' on [0, inf)"""
    return AubinTalenti(pair)


def at_gradient_norm_whole_space(pair: ExponentPair) -> float:
    """||grad U||_{L^p(R^N)} from the Beta-function closed form"""
    N, p = pair.N, pair.p
    energy = (surface_measure(N) * ((N - p) / (p - 1.0)) ** p / pair.p_conj
              * gamma(N + 1.0 - N / p) * gamma(N / p - 1.0) / gamma(float(N)))
    return energy ** (1.0 / p)


def at_lpstar_integral_whole_space(pair: ExponentPair) -> float:
    """int_{R^N} U^{p*} dx"""
    N, p = pair.N, pair.p
    return surface_measure(N) / pair.p_conj * gamma(N - N / p) * gamma(N / p) / gamma(float(N))


def at_lpstar_norm_whole_space(pair: ExponentPair) -> float:
    return at_lpstar_integral_whole_space(pair) ** (1.0 / pair.p_star)


@dataclass(frozen=True)
class TruncatedNorms:
    radius: float
    grad_norm: float
    lpstar_norm: float

    @property
    def sobolev_ratio(self) -> float:
        return self.grad_norm / self.lpstar_norm


def at_truncated_norms(pair: ExponentPair, radius: float, quad: QuadratureSpec) -> TruncatedNorms:
    """||grad U||_{L^p(B_R)} and ||U||_{L^{p*}(B_R)} by quadrature on [0, R]"""
    bubble = AubinTalenti(pair)
    N = pair.N
    grad = ball_integral(lambda r: np.abs(bubble.base_derivative(r)) ** pair.p, N, quad, radius)
    mass = ball_integral(lambda r: bubble.base_value(r) ** pair.p_star, N, quad, radius)
    return TruncatedNorms(radius, grad ** (1.0 / pair.p), mass ** (1.0 / pair.p_star))


@dataclass(frozen=True)
class ModifiedAT:
    """W_eps = K (bubble - bubble(1)) with K = 1/||grad U||_{L^p(B_{1/eps})}"""

    base: AubinTalenti
    K: float
    profile: RadialProfile

    @property
    def epsilon(self) -> float:
        return self.base.epsilon

    @property
    def tail(self) -> float:
        return self.base.tail


def modified_at_parts(pair: ExponentPair, epsilon: float, quad: QuadratureSpec) -> ModifiedAT:
    if not (math.isfinite(epsilon) and 0.0 < epsilon < 1.0):
        raise DomainViolation(f"epsilon must lie in (0, 1), got {epsilon!r}")
    base = AubinTalenti(pair, epsilon)
    tail = base.tail

    unnormalized = RadialProfile.analytic(
        lambda r: base.value(r) - tail, base.derivative, label=f"W(eps={epsilon:g}) unnormalized")
    # ||grad of the unnormalized profile||_{L^p(B)} = ||grad U||_{L^p(B_{1/eps})} after r = eps x
    norm = grad_p_norm(unnormalized, pair, quad)
    if not (math.isfinite(norm) and norm > 0):
        raise QuadratureFailure(f"gradient norm of the bubble on B_(1/eps) failed for eps = {epsilon!r}")
    K = 1.0 / norm

    profile = RadialProfile.analytic(
        lambda r: K * (base.value(r) - tail) * (np.asarray(r) <= 1.0),
        lambda r: K * base.derivative(r) * (np.asarray(r) < 1.0),
        label=f"W(eps={epsilon:g})",
    )
    logger.debug(f"modified bubble eps={epsilon:g}: K={K:.12g}, tail={tail:.3e}")
    return ModifiedAT(base, K, profile)


def make_modified_at(pair: ExponentPair, epsilon: float, quad: QuadratureSpec) -> RadialProfile:
    """W(r) = K eps^{-(N-p)/p} (U(r/eps) - U(1/eps)) with unit gradient p-norm"""
    return modified_at_parts(pair, epsilon, quad).profile


def moser_constant(N: int, t: float) -> float:
    """c = (omega_{N-1} t)^{-1/N}"""
    return (surface_measure(N) * t) ** (-1.0 / N)


def make_moser(N: int, t: float) -> RadialProfile:
    """c t on [0, e^{-t}], c log(1/r) on [e^{-t}, 1], with ||grad v||_{L^N} = 1"""
    if not (math.isfinite(t) and t > 0):
        raise DomainViolation(f"Moser profile requires t > 0, got {t!r}")
    c = moser_constant(N, t)
    edge = math.exp(-t)

    def value(r):
        with np.errstate(divide="ignore"):
            return c * np.clip(-np.log(np.asarray(r, dtype=float)), 0.0, t)

    def derivative(r):
        r = np.asarray(r, dtype=float)
        inside = (r > edge) & (r < 1.0)
        return np.where(inside, -c / np.where(inside, r, 1.0), 0.0)

    return RadialProfile.analytic(value, derivative, breakpoints=(edge,), label=f"moser(t={t:g})")


def half_energy_tent(pair: ExponentPair) -> RadialProfile:
    """a (1 - r) with ||grad||_p^p = 1/2"""
    a = (0.5 / ball_volume(pair.N)) ** (1.0 / pair.p)
    return RadialProfile.piecewise_linear([0.0, 1.0], [a, 0.0], label="tent")


@dataclass(frozen=True)
class TwoBubble:
    phi: RadialProfile
    psi: RadialProfile
    n: int
    C_n: float
    profile: RadialProfile


def _bubble_sum_piecewise_linear(phi: RadialProfile, psi: RadialProfile, n: int,
                                 height: float) -> RadialProfile:
    knots = np.union1d(phi.knots, psi.knots / n)
    values = phi.value(knots) + height * psi.value(n * knots)
    values[-1] = 0.0
    return RadialProfile.piecewise_linear(knots, values, label=f"two-bubble(n={n})")


def _bubble_sum_analytic(phi: RadialProfile, psi: RadialProfile, n: int,
                         height: float) -> RadialProfile:
    breaks = set(phi.breakpoints) | {b / n for b in psi.breakpoints}
    if n > 1:
        breaks.add(1.0 / n)
    return RadialProfile.analytic(
        lambda r: phi.value(r) + height * psi.value(n * np.asarray(r, dtype=float)),
        lambda r: phi.derivative(r) + height * n * psi.derivative(n * np.asarray(r, dtype=float)),
        breakpoints=tuple(breaks),
        label=f"two-bubble(n={n})",
    )


def two_bubble_parts(pair: ExponentPair, n: int, phi: RadialProfile, psi: RadialProfile,
                     quad: QuadratureSpec) -> TwoBubble:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainViolation(f"two-bubble scale n must be an integer >= 1, got {n!r}")
    n = int(n)
    for name, profile in (("phi", phi), ("psi", psi)):
        energy = grad_p_norm(profile, pair, quad) ** pair.p
        if abs(energy - 0.5) > HALF_ENERGY_TOL:
            raise PreconditionViolation(
                f"{name} must have ||grad||_p^p = 1/2, got {energy!r}")

    height = n ** ((pair.N - pair.p) / pair.p)
    if phi.is_piecewise_linear and psi.is_piecewise_linear:
        combined = _bubble_sum_piecewise_linear(phi, psi, n, height)
    else:
        combined = _bubble_sum_analytic(phi, psi, n, height)

    norm = grad_p_norm(combined, pair, quad)
    C_n = 1.0 / norm
    return TwoBubble(phi, psi, n, C_n, combined.scaled(C_n))


def make_two_bubble(pair: ExponentPair, n: int, phi: RadialProfile, psi: RadialProfile,
                    quad: QuadratureSpec) -> RadialProfile:
    """C_n (phi(r) + n^{(N-p)/p} psi(n r)) with psi zero-extended outside B"""
    return two_bubble_parts(pair, n, phi, psi, quad).profile


def default_moser_t(knots: Optional[np.ndarray] = None) -> float:
    """Plateau height keeping the Moser kink inside the first knot cell"""
    if knots is None or len(knots) < 2:
        return 1.0
    return max(1.0, -math.log(float(knots[1])) / 2.0)
