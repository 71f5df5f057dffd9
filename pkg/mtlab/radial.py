"""
Moser-Trudinger Lab - Radial Profiles and Quadrature
====================================================

Radial functions v(|x|) on the unit ball and the one-dimensional integrals
omega_{N-1} int_0^R r^{N-1} f(r) dr every ball integral reduces to.

The mesh is power-graded toward the origin, merged with the profile's
breakpoints, and refined so that no panel away from the origin spans more
than a factor of two in radius. Each panel carries Gauss-Legendre nodes;
sums use numpy's pairwise summation, so results are reproducible for a
fixed mesh.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .constants import ExponentPair, alpha_n, ball_volume, surface_measure
from .errors import DegenerateProfile, DomainViolation, EvaluationOverflow, QuadratureFailure
from .functional import FpEvaluator, exp_checked, log_mt_integrand

logger = logging.getLogger(__name__)

RadialFunction = Callable[[np.ndarray], np.ndarray]

# value at r = 1 treated as zero trace
_BOUNDARY_TOL = 1e-12
# relative slack separating a violated inequality from roundoff
LEMMA_SLACK = 1e-9


class ProfileKind(Enum):
    """Representations of a radial profile"""
    ANALYTIC = "analytic"
    PIECEWISE_LINEAR = "piecewise-linear"


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """
    Radial function on [0, 1] with zero boundary trace.

    Evaluation beyond r = 1 returns the zero extension.
    """

    kind: ProfileKind
    value: RadialFunction
    derivative: RadialFunction
    breakpoints: tuple = ()
    knots: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    label: str = "profile"

    @classmethod
    def piecewise_linear(cls, knots: Sequence[float], values: Sequence[float],
                         label: str = "piecewise-linear") -> 'RadialProfile':
        knots = np.array(knots, dtype=float)
        values = np.array(values, dtype=float)
        if knots.ndim != 1 or knots.shape != values.shape or knots.size < 2:
            raise DomainViolation("knots and values must be 1-D arrays of equal length >= 2")
        if knots[0] != 0.0 or knots[-1] != 1.0 or np.any(np.diff(knots) <= 0):
            raise DomainViolation("knots must increase strictly from 0 to 1")
        if not np.all(np.isfinite(values)):
            raise DomainViolation("profile values must be finite")
        if values[-1] != 0.0:
            raise DomainViolation(f"profile must vanish at r = 1, got v(1) = {values[-1]!r}")

        knots.flags.writeable = False
        values.flags.writeable = False
        slopes = np.diff(values) / np.diff(knots)
        last = slopes.size - 1

        def value(r):
            return np.interp(r, knots, values, right=0.0)

        def derivative(r):
            r = np.asarray(r, dtype=float)
            index = np.clip(np.searchsorted(knots, r, side="right") - 1, 0, last)
            return np.where(r < 1.0, slopes[index], 0.0)

        return cls(
            kind=ProfileKind.PIECEWISE_LINEAR,
            value=value,
            derivative=derivative,
            breakpoints=tuple(float(k) for k in knots[1:-1]),
            knots=knots,
            values=values,
            label=label,
        )

    @classmethod
    def analytic(cls, value: RadialFunction, derivative: RadialFunction,
                 breakpoints: Sequence[float] = (), label: str = "analytic") -> 'RadialProfile':
        boundary = float(np.asarray(value(np.array([1.0])))[0])
        if not math.isfinite(boundary) or abs(boundary) > _BOUNDARY_TOL:
            raise DomainViolation(f"profile must vanish at r = 1, got v(1) = {boundary!r}")
        points = tuple(sorted({float(b) for b in breakpoints if 0.0 < b < 1.0}))
        return cls(ProfileKind.ANALYTIC, value, derivative, points, label=label)

    @property
    def is_piecewise_linear(self) -> bool:
        return self.kind is ProfileKind.PIECEWISE_LINEAR

    @property
    def slopes(self) -> np.ndarray:
        if not self.is_piecewise_linear:
            raise DomainViolation("slopes are defined for piecewise-linear profiles only")
        return np.diff(self.values) / np.diff(self.knots)

    def scaled(self, c: float, label: Optional[str] = None) -> 'RadialProfile':
        c = float(c)
        label = label or self.label
        if self.is_piecewise_linear:
            return RadialProfile.piecewise_linear(self.knots, c * self.values, label=label)
        value, derivative = self.value, self.derivative
        return RadialProfile(
            ProfileKind.ANALYTIC,
            lambda r: c * value(r),
            lambda r: c * derivative(r),
            self.breakpoints,
            label=label,
        )


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre rule on a mesh graded toward r = 0"""

    panels: int = 200
    nodes_per_panel: int = 16
    grading: float = 2.0
    cutoff: float = 1e-12

    def __post_init__(self):
        self._validate()

    def _validate(self):
        if self.panels < 1:
            raise DomainViolation(f"panels must be >= 1: {self.panels}")
        if not 2 <= self.nodes_per_panel <= 64:
            raise DomainViolation(f"nodes_per_panel must lie in [2, 64]: {self.nodes_per_panel}")
        if not self.grading >= 1.0:
            raise DomainViolation(f"grading must be >= 1: {self.grading}")
        if not 0.0 < self.cutoff < 1.0:
            raise DomainViolation(f"cutoff must lie in (0, 1): {self.cutoff}")

    def refined(self, factor: int = 2) -> 'QuadratureSpec':
        return QuadratureSpec(self.panels * factor, self.nodes_per_panel, self.grading, self.cutoff)


@lru_cache(maxsize=16)
def _gauss_legendre(order: int) -> tuple:
    return leggauss(order)


def panel_edges(quad: QuadratureSpec, radius: float = 1.0, breakpoints: tuple = ()) -> np.ndarray:
    """Sorted panel edges on [0, radius]."""
    k = np.arange(quad.panels + 1, dtype=float)
    graded = radius * (k / quad.panels) ** quad.grading
    floor = quad.cutoff * radius
    graded = graded[(graded == 0.0) | (graded >= floor)]
    scaled_breaks = [radius * b for b in breakpoints if 0.0 < b < 1.0]
    edges = np.unique(np.concatenate([graded, scaled_breaks, [0.0, radius]]))

    refined = [edges[0]]
    for a, c in zip(edges[:-1], edges[1:]):
        if a >= floor and c / a > 2.0:
            pieces = int(math.ceil(math.log2(c / a)))
            refined.extend(a * (c / a) ** (np.arange(1, pieces) / pieces))
        refined.append(c)
    return np.asarray(refined)


@lru_cache(maxsize=256)
def quadrature_nodes(quad: QuadratureSpec, radius: float = 1.0, breakpoints: tuple = ()) -> tuple:
    """(nodes, weights) of the composite rule on [0, radius]; read-only arrays"""
    x, w = _gauss_legendre(quad.nodes_per_panel)
    edges = panel_edges(quad, radius, breakpoints)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def ball_integral(f: RadialFunction, N: int, quad: QuadratureSpec, radius: float = 1.0,
                  breakpoints: tuple = ()) -> float:
    """omega_{N-1} int_0^radius r^{N-1} f(r) dr"""
    r, w = quadrature_nodes(quad, float(radius), tuple(breakpoints))
    values = np.asarray(f(r), dtype=float)
    if not np.all(np.isfinite(values)):
        bad = float(r[np.argmin(np.isfinite(values))])
        raise QuadratureFailure(f"non-finite integrand at r = {bad!r}", radius=bad)
    total = surface_measure(N) * float(np.sum(w * r ** (N - 1) * values))
    if not math.isfinite(total):
        raise QuadratureFailure("ball integral is not finite")
    return total


def _log_ball_integral(u: RadialProfile, log_integrand: Callable, N: int, quad: QuadratureSpec,
                       name: str) -> float:
    r, w = quadrature_nodes(quad, 1.0, u.breakpoints)
    log_values = np.asarray(log_integrand(u.value(r)), dtype=float)
    try:
        values = exp_checked(log_values, u.value(r), name)
    except EvaluationOverflow as exc:
        index = int(np.argmax(log_values))
        raise EvaluationOverflow(f"{name} integrand overflows at r = {r[index]!r}",
                                 argument=exc.argument, radius=float(r[index])) from exc
    total = surface_measure(N) * float(np.sum(w * r ** (N - 1) * values))
    if not math.isfinite(total):
        raise QuadratureFailure(f"integral of {name} is not finite")
    return total


def gradient_norm(u: RadialProfile, q: float, N: int, quad: QuadratureSpec,
                  radius: float = 1.0) -> float:
    """(omega_{N-1} int_0^radius r^{N-1} |v'|^q dr)^{1/q}; exact per segment for piecewise-linear v"""
    if not q >= 1.0:
        raise DomainViolation(f"gradient_norm requires q >= 1, got {q!r}")
    if not 0.0 < radius <= 1.0:
        raise DomainViolation(f"radius must lie in (0, 1], got {radius!r}")

    if u.is_piecewise_linear:
        knots = np.minimum(u.knots, radius)
        shells = np.diff(knots ** N) / N
        energy = surface_measure(N) * float(np.sum(np.abs(u.slopes) ** q * shells))
    else:
        r, w = quadrature_nodes(quad, float(radius), tuple(b / radius for b in u.breakpoints if b < radius))
        slopes = np.asarray(u.derivative(r), dtype=float)
        if not np.all(np.isfinite(slopes)):
            bad = float(r[np.argmin(np.isfinite(slopes))])
            raise QuadratureFailure(f"non-finite derivative at r = {bad!r}", radius=bad)
        energy = surface_measure(N) * float(np.sum(w * r ** (N - 1) * np.abs(slopes) ** q))

    if not math.isfinite(energy):
        raise QuadratureFailure(f"gradient energy of {u.label} is not finite")
    return energy ** (1.0 / q)


def grad_p_norm(u: RadialProfile, pair: ExponentPair, quad: QuadratureSpec) -> float:
    return gradient_norm(u, pair.p, pair.N, quad)


def lq_norm(u: RadialProfile, q: float, N: int, quad: QuadratureSpec) -> float:
    """(omega_{N-1} int_0^1 r^{N-1} |v|^q dr)^{1/q}"""
    if not q >= 1.0:
        raise DomainViolation(f"lq_norm requires q >= 1, got {q!r}")
    integral = ball_integral(lambda r: np.abs(u.value(r)) ** q, N, quad, 1.0, u.breakpoints)
    return integral ** (1.0 / q)


def lq_integral(u: RadialProfile, q: float, N: int, quad: QuadratureSpec) -> float:
    """int_B |u|^q dx"""
    return lq_norm(u, q, N, quad) ** q


def integrate_f_p(u: RadialProfile, ev: FpEvaluator, quad: QuadratureSpec) -> float:
    """int_B F_p(u) dx"""
    return _log_ball_integral(u, ev.log_f_p, ev.pair.N, quad, "F_p")


def integrate_mt(u: RadialProfile, N: int, quad: QuadratureSpec) -> float:
    """G(u) = int_B exp(alpha_N |u|^{N/(N-1)}) dx"""
    return _log_ball_integral(u, lambda s: log_mt_integrand(s, N), N, quad, "exp(alpha_N |u|^{N'})")


def integrate_h(u: RadialProfile, ev: FpEvaluator, quad: QuadratureSpec) -> float:
    """int_B H(u) dx"""
    ev.pair.require_concentration_regime("integrate_h")
    return _log_ball_integral(u, ev.log_h_correction, ev.pair.N, quad, "H")


def integrate_rescaled(u: RadialProfile, ev: FpEvaluator, quad: QuadratureSpec) -> float:
    return _log_ball_integral(u, ev.log_rescaled, ev.pair.N, quad, "rescaled F_p")


# -- radial lemma ----------------------------------------------------------------

def pradial_bound(r: np.ndarray, pair: ExponentPair, grad_norm: float) -> np.ndarray:
    """
    (N |B|^{1/p})^{-1} {N (p-1)/(N-p) (r^{-(N-p)/(p-1)} - 1)}^{(p-1)/p} ||grad u||_p
    """
    r = np.asarray(r, dtype=float)
    N, p = pair.N, pair.p
    a = (N - p) / (p - 1.0)
    front = 1.0 / (N * ball_volume(N) ** (1.0 / p))
    growth = N * np.expm1(-a * np.log(r)) / a
    return front * growth ** ((p - 1.0) / p) * grad_norm


def holder_step_bound(r: np.ndarray, pair: ExponentPair, grad_norm: float) -> np.ndarray:
    """omega^{-1/p} ||grad u||_p {(p-1)/(N-p) (r^{-(N-p)/(p-1)} - 1)}^{(p-1)/p}"""
    r = np.asarray(r, dtype=float)
    N, p = pair.N, pair.p
    a = (N - p) / (p - 1.0)
    growth = np.expm1(-a * np.log(r)) / a
    return surface_measure(N) ** (-1.0 / p) * grad_norm * growth ** ((p - 1.0) / p)


def alvino_bound(r: np.ndarray, N: int, grad_norm: float) -> np.ndarray:
    """alpha_N^{-(N-1)/N} (N log(1/r))^{(N-1)/N} ||grad u||_N"""
    r = np.asarray(r, dtype=float)
    return (alpha_n(N) ** (-(N - 1.0) / N)
            * (-N * np.log(r)) ** ((N - 1.0) / N) * grad_norm)


@dataclass
class RadialLemmaReport:
    """Both forms of the radial lemma at a list of radii"""

    radii: np.ndarray
    values: np.ndarray
    bounds: np.ndarray
    margins: np.ndarray
    f_form_margins: np.ndarray
    grad_norm: float
    slack: float = LEMMA_SLACK
    holds: bool = field(init=False)

    def __post_init__(self):
        self.holds = bool(np.all(self.margins >= -self.slack) and np.all(self.f_form_margins >= -self.slack))

    @property
    def worst_margin(self) -> float:
        return float(min(np.min(self.margins), np.min(self.f_form_margins)))


def radial_lemma_check(u: RadialProfile, pair: ExponentPair, radii: Sequence[float],
                       quad: QuadratureSpec, ev: Optional[FpEvaluator] = None) -> RadialLemmaReport:
    """
    Evaluate |v(r)| <= bound(r) and F_p(v(r)/||grad v||_p) <= r^{-N}.

    Margins are relative: 1 - |v|/bound and 1 - F_p r^N.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0 or np.any((radii <= 0.0) | (radii >= 1.0)):
        raise DomainViolation("radii must be a non-empty list inside (0, 1)")
    norm = grad_p_norm(u, pair, quad)
    if norm == 0.0:
        raise DegenerateProfile(f"{u.label} has zero gradient norm")

    ev = ev or FpEvaluator.for_pair(pair)
    values = np.abs(np.asarray(u.value(radii), dtype=float))
    bounds = pradial_bound(radii, pair, norm)
    margins = 1.0 - values / bounds
    log_f = np.asarray(ev.log_f_p(values / norm), dtype=float)
    f_form = -np.expm1(log_f + pair.N * np.log(radii))
    logger.debug(f"radial lemma for {u.label}: worst margin {min(margins.min(), f_form.min()):.3e}")
    return RadialLemmaReport(radii, values, bounds, margins, f_form, norm)
