"""
Moser-Trudinger Lab - Experiments
=================================

Limit statements turned into finite sweeps with trend assertions:

- M_p -> CC(N) as p -> N
- the modified bubbles W_eps realizing M_p as eps -> 0
- F_p -> exp(alpha_N |s|^{N/(N-1)}) pointwise and under the integral
- lower semicontinuity through the Hölder rescaling
- the two-bubble splitting of the L^{p*} mass
- randomized verification of the inequalities everything rests on

Grid points are evaluated in a thread pool; rows are assembled in grid order.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Sequence, TypeVar

import numpy as np

from .constants import (
    ExponentPair,
    ball_volume,
    carleson_chang_limit,
    concentration_level,
    concentration_level_gamma_form,
    gamma_ratio_exponent,
    log_sobolev_constant,
    mp_gap_bound,
    mp_leading_gap,
)
from .errors import DomainViolation, EvaluationOverflow, PreconditionViolation, QuadratureFailure
from .families import (
    at_gradient_norm_whole_space,
    make_moser,
    modified_at_parts,
    half_energy_tent,
    two_bubble_parts,
)
from .functional import FpEvaluator, elementary_power_bounds, mt_integrand
from .radial import (
    QuadratureSpec,
    RadialProfile,
    alvino_bound,
    grad_p_norm,
    gradient_norm,
    integrate_f_p,
    integrate_h,
    integrate_mt,
    integrate_rescaled,
    lq_integral,
    pradial_bound,
    radial_lemma_check,
)
from .reports import ExperimentReport
from .specfun import harmonic
from .trends import ALLOWED_VIOLATIONS, aitken_limit, decreasing_trend, empirical_orders

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_EPSILONS = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4)
DEFAULT_N_VALUES = (2, 8, 32, 128)
DEFAULT_S_VALUES = (0.3, 1.0, 3.0)
MEMBERSHIP_RADII = (0.5, 0.1, 0.01)
SUITES = ("elementary", "sandwich", "radial-lemma", "alvino")

VERIFY_SLACK = 1e-9
HOLDER_SLACK = 1e-10
# exponent of F_p kept below this in the sandwich suite
SANDWICH_LOG_CAP = 400.0
SANDWICH_FRACTIONS = (0.1, 0.3, 0.5, 0.7, 0.9)

NUMERICAL_FAILURES = (EvaluationOverflow, QuadratureFailure)

# terminal tolerances fixed from high-precision reference runs
TOLERANCES = {
    "forms_agree": 1e-9,
    "mp_gap_k4": 1e-2,
    "unit_norm": 1e-8,
    "two_bubble_unit_norm": 1e-6,
    "lpstar_rel_gap_at_1e-3": 2e-2,
    "f_p_rel_gap_at_1e-4": 5e-2,
    "alvino_consistency": 1e-3,
}


def limit_grid(N: int, k_values: Sequence[int]) -> List[float]:
    """p = N - 10^{-k}"""
    return [N - 10.0 ** (-k) for k in k_values]


def parallel_map(func: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """map() over a thread pool; results keep the order of items"""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _guarded(func: Callable[[T], R]) -> Callable[[T], R]:
    """func with numerical failures returned instead of raised"""
    def call(item: T):
        try:
            return func(item)
        except NUMERICAL_FAILURES as exc:
            return exc
    return call


def _until_failure(report: ExperimentReport, items: Sequence[T], results: Sequence) -> Iterator[tuple]:
    """(item, result) in grid order; the first failure is raised carrying the rows added so far"""
    for index, (item, result) in enumerate(zip(items, results)):
        if isinstance(result, NUMERICAL_FAILURES):
            result.partial = report
            logger.warning(f"⚠️ {report.name}: grid point {index} failed after {len(report.rows)} rows")
            raise result
        yield item, result


@dataclass(frozen=True)
class SweepSpec:
    """A strictly monotone parameter grid with the mesh and seed it is run under"""

    N: int
    grid: tuple
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    seed: int = 0

    def __post_init__(self):
        grid = tuple(float(x) for x in self.grid)
        object.__setattr__(self, "grid", grid)
        if not grid:
            raise DomainViolation("sweep grid must not be empty")
        if not all(math.isfinite(x) for x in grid):
            raise DomainViolation(f"sweep grid must be finite: {grid}")
        steps = np.diff(grid)
        if steps.size and not (np.all(steps > 0) or np.all(steps < 0)):
            raise DomainViolation(f"sweep grid must be strictly monotone: {grid}")

    def metadata(self) -> dict:
        return {
            "N": self.N,
            "grid_size": len(self.grid),
            "panels": self.quad.panels,
            "nodes_per_panel": self.quad.nodes_per_panel,
            "grading": self.quad.grading,
            "cutoff": self.quad.cutoff,
            "seed": self.seed,
        }


def _trend(report: ExperimentReport, name: str, gaps: Sequence[float],
           allowed: int = ALLOWED_VIOLATIONS):
    verdict = decreasing_trend(gaps, allowed)
    report.check(name, verdict.passed, verdict.describe())


def _finish(report: ExperimentReport, started: float) -> ExperimentReport:
    report.wall_time = time.perf_counter() - started
    status = "✅" if report.passed else "❌"
    logger.info(f"{status} {report.name}: {len(report.rows)} rows, "
                f"{len(report.checks) - len(report.failed_checks)}/{len(report.checks)} checks "
                f"in {report.wall_time:.2f}s")
    for check in report.failed_checks:
        logger.warning(f"⚠️ {report.name}: check '{check.name}' failed ({check.detail})")
    return report


# -- M_p -> CC(N) -----------------------------------------------------------------

def sweep_mp_limit(N: int, p_grid: Sequence[float], workers: int = 1) -> ExperimentReport:
    """Both forms of M_p against CC(N) along p -> N"""
    started = time.perf_counter()
    spec = SweepSpec(N, tuple(p_grid))
    pairs = [ExponentPair(N, p) for p in spec.grid]
    for pair in pairs:
        pair.require_concentration_regime("sweep_mp_limit")

    cc = carleson_chang_limit(N)
    H = harmonic(N - 1)

    def evaluate(pair: ExponentPair) -> tuple:
        return (concentration_level(pair), concentration_level_gamma_form(pair),
                gamma_ratio_exponent(pair), mp_gap_bound(pair), mp_leading_gap(pair))

    logger.info(f"🚀 sweep-mp: N={N}, {len(pairs)} exponents")
    results = parallel_map(_guarded(evaluate), pairs, workers)

    report = ExperimentReport("sweep-mp", metadata=spec.metadata())
    report.metadata["cc_limit"] = cc
    for pair, (m, m_gamma, exponent, bound, leading) in _until_failure(report, pairs, results):
        report.add("M_p", "sobolev_form", pair.p, m, cc)
        report.add("M_p", "gamma_form", pair.p, m_gamma, cc)
        report.add("digamma_limit", "gamma_ratio_exponent", pair.p, exponent, H)
        report.add("gap_bound", "concavity", pair.p, bound, None)
        report.add("gap_leading", "trigamma", pair.p, leading, None)

    sobolev_gaps = report.gaps("M_p", "sobolev_form")
    gamma_gaps = report.gaps("M_p", "gamma_form")
    _trend(report, "M_p gap decreasing (sobolev form)", sobolev_gaps)
    _trend(report, "M_p gap decreasing (gamma form)", gamma_gaps)

    disagreement = max(abs(a.computed - b.computed) / b.computed
                       for a, b in zip(report.select("M_p", "sobolev_form"), report.select("M_p", "gamma_form")))
    report.check("forms agree", disagreement <= TOLERANCES["forms_agree"],
                 f"max relative difference {disagreement:.3e}")

    last_bound = results[-1][3]
    report.check("final gap within concavity bound", gamma_gaps[-1] <= last_bound * (1.0 + 1e-9),
                 f"gap {gamma_gaps[-1]:.6e} vs bound {last_bound:.6e}")

    distances = [N - p for p in spec.grid]
    report.metadata["empirical_orders"] = empirical_orders(distances, gamma_gaps)
    report.metadata["extrapolated_limit"] = aitken_limit([row.computed for row in report.select("M_p", "gamma_form")])
    return _finish(report, started)


# -- concentration along W_eps ------------------------------------------------------

@dataclass(frozen=True)
class ConcentrationPoint:
    epsilon: float
    grad_norm: float
    lpstar_integral: float
    f_p_integral: float
    h_integral: float
    K: float
    tail: float
    local_grad_norms: tuple


def sweep_concentration(pair: ExponentPair, eps_grid: Sequence[float] = DEFAULT_EPSILONS,
                        quad: Optional[QuadratureSpec] = None, workers: int = 1) -> ExperimentReport:
    """
    Norms and integrals of W_eps against the values the eps -> 0 limit predicts.

    int F_p(W) is bracketed by |B| + leading int |W|^{p*} from below and by
    M_p + int H(W) from above at every eps.
    """
    started = time.perf_counter()
    pair.require_concentration_regime("sweep_concentration")
    quad = quad or QuadratureSpec()
    spec = SweepSpec(pair.N, tuple(eps_grid), quad)
    ev = FpEvaluator.for_pair(pair)
    consts = ev.consts
    N = pair.N
    target_mass = math.exp(-pair.p_star * log_sobolev_constant(pair))
    K_limit = 1.0 / at_gradient_norm_whole_space(pair)

    def evaluate(eps: float) -> ConcentrationPoint:
        parts = modified_at_parts(pair, eps, quad)
        u = parts.profile
        local = tuple(gradient_norm(u, pair.p, N, quad, radius=rho) for rho in MEMBERSHIP_RADII)
        return ConcentrationPoint(
            epsilon=eps,
            grad_norm=grad_p_norm(u, pair, quad),
            lpstar_integral=lq_integral(u, pair.p_star, N, quad),
            f_p_integral=integrate_f_p(u, ev, quad),
            h_integral=integrate_h(u, ev, quad),
            K=parts.K,
            tail=parts.tail,
            local_grad_norms=local,
        )

    logger.info(f"🚀 concentrate: N={N}, p={pair.p:g}, {len(spec.grid)} epsilons")
    points = parallel_map(_guarded(evaluate), spec.grid, workers)

    report = ExperimentReport("concentrate", metadata=spec.metadata())
    report.metadata.update({"p": pair.p, "M_p": consts.M_p, "S_p_pow": target_mass})
    for eps, pt in _until_failure(report, spec.grid, points):
        report.add("grad_norm", "W", eps, pt.grad_norm, 1.0)
        report.add("lpstar_integral", "W", eps, pt.lpstar_integral, target_mass)
        report.add("f_p_integral", "W", eps, pt.f_p_integral, consts.M_p)
        report.add("f_p_lower", "W", eps, consts.vol_B + consts.leading * pt.lpstar_integral, consts.M_p)
        report.add("h_integral", "W", eps, pt.h_integral, 0.0)
        report.add("K", "W", eps, pt.K, K_limit)
        report.add("tail", "W", eps, pt.tail, 0.0)
        for rho, local in zip(MEMBERSHIP_RADII, pt.local_grad_norms):
            report.add("local_grad_norm", f"rho={rho:g}", eps, local, 1.0)

    worst_norm = max(abs(pt.grad_norm - 1.0) for pt in points)
    report.check("unit gradient norm", worst_norm <= TOLERANCES["unit_norm"], f"max deviation {worst_norm:.3e}")

    _trend(report, "lpstar gap decreasing", report.gaps("lpstar_integral"))
    _trend(report, "f_p gap decreasing", report.gaps("f_p_integral"))
    _trend(report, "h integral decreasing", report.gaps("h_integral"), allowed=0)
    _trend(report, "K gap decreasing", report.gaps("K"))
    _trend(report, "tail decreasing", report.gaps("tail"))
    for rho in MEMBERSHIP_RADII:
        _trend(report, f"local norm gap decreasing (rho={rho:g})", report.gaps("local_grad_norm", f"rho={rho:g}"))

    upper_ok = all(pt.f_p_integral <= (consts.M_p + pt.h_integral) * (1.0 + VERIFY_SLACK) for pt in points)
    report.check("upper estimate M_p + int H", upper_ok)
    lower_ok = all(pt.f_p_integral >= (consts.vol_B + consts.leading * pt.lpstar_integral) * (1.0 - VERIFY_SLACK)
                   for pt in points)
    report.check("lower estimate |B| + leading int |W|^p*", lower_ok)

    last = points[-1]
    if last.epsilon <= 1e-3:
        gap = report.select("lpstar_integral")[-1].rel_gap
        report.check("terminal lpstar gap", gap <= TOLERANCES["lpstar_rel_gap_at_1e-3"], f"relative gap {gap:.3e}")
    if last.epsilon <= 1e-4:
        gap = report.select("f_p_integral")[-1].rel_gap
        report.check("terminal f_p gap", gap <= TOLERANCES["f_p_rel_gap_at_1e-4"], f"relative gap {gap:.3e}")

    report.metadata["empirical_orders"] = empirical_orders(list(spec.grid), report.gaps("h_integral"))
    # mesh independence of the last integral
    refined = integrate_f_p(modified_at_parts(pair, last.epsilon, quad).profile, ev, quad.refined())
    report.metadata["quadrature_drift"] = abs(refined - last.f_p_integral) / last.f_p_integral
    return _finish(report, started)


# -- pointwise limit of F_p ---------------------------------------------------------

def pointwise_limit_study(N: int, s_values: Sequence[float] = DEFAULT_S_VALUES,
                          p_grid: Optional[Sequence[float]] = None,
                          profile: Optional[RadialProfile] = None,
                          quad: Optional[QuadratureSpec] = None, workers: int = 1) -> ExperimentReport:
    """F_p(s) against exp(alpha_N s^{N/(N-1)}) and int F_p(u) against G(u) as p -> N"""
    started = time.perf_counter()
    quad = quad or QuadratureSpec()
    spec = SweepSpec(N, tuple(p_grid) if p_grid is not None else tuple(limit_grid(N, range(1, 7))), quad)
    if not all(math.isfinite(s) for s in s_values):
        raise DomainViolation(f"s values must be finite: {s_values}")
    profile = profile or RadialProfile.piecewise_linear([0.0, 1.0], [0.5, 0.0], label="(1-r)/2")

    pairs = [ExponentPair(N, p) for p in spec.grid]
    evaluators = parallel_map(FpEvaluator.for_pair, pairs, workers)

    report = ExperimentReport("limit-f", metadata=spec.metadata())
    for s in s_values:
        target = mt_integrand(s, N)
        series = f"s={s:g}"
        for ev in evaluators:
            report.add("f_p", series, ev.pair.p, ev.f_p(s), target)
        _trend(report, f"pointwise gap decreasing ({series})", report.gaps("f_p", series))

    target_g = integrate_mt(profile, N, quad)
    integrals = parallel_map(_guarded(lambda ev: integrate_f_p(profile, ev, quad)), evaluators, workers)
    for ev, value in _until_failure(report, evaluators, integrals):
        report.add("f_p_integral", profile.label, ev.pair.p, value, target_g)
    _trend(report, f"integral gap decreasing ({profile.label})", report.gaps("f_p_integral", profile.label))
    return _finish(report, started)


# -- lower semicontinuity ------------------------------------------------------------

def semicontinuity_study(N: int, p_grid: Optional[Sequence[float]] = None,
                         profiles: Optional[Sequence[RadialProfile]] = None,
                         quad: Optional[QuadratureSpec] = None, workers: int = 1) -> ExperimentReport:
    """
    ||grad u||_p <= |B|^{1/p - 1/N} ||grad u||_N and the rescaled functional
    against G(u) for profiles in the W^{1,N} unit ball.
    """
    started = time.perf_counter()
    quad = quad or QuadratureSpec()
    spec = SweepSpec(N, tuple(p_grid) if p_grid is not None else tuple(limit_grid(N, range(1, 6))), quad)
    if profiles is None:
        profiles = [RadialProfile.piecewise_linear([0.0, 1.0], [0.0, 0.0], label="zero"), make_moser(N, 1.0)]

    pairs = [ExponentPair(N, p) for p in spec.grid]
    evaluators = parallel_map(FpEvaluator.for_pair, pairs, workers)
    vol = ball_volume(N)

    report = ExperimentReport("semicontinuity", metadata=spec.metadata())
    for u in profiles:
        norm_N = gradient_norm(u, N, N, quad)
        if norm_N > 1.0 + 1e-12:
            raise PreconditionViolation(f"{u.label} has ||grad u||_N = {norm_N!r} > 1")
        target = integrate_mt(u, N, quad)

        def evaluate(ev: FpEvaluator, u=u) -> tuple:
            return gradient_norm(u, ev.pair.p, N, quad), integrate_rescaled(u, ev, quad)

        results = parallel_map(_guarded(evaluate), evaluators, workers)
        margins = []
        for ev, (norm_p, rescaled) in _until_failure(report, evaluators, results):
            p = ev.pair.p
            bound = vol ** (1.0 / p - 1.0 / N) * norm_N
            report.add("holder_norm", u.label, p, norm_p, bound)
            report.add("rescaled_integral", u.label, p, rescaled, target)
            margins.append((bound - norm_p) / bound if bound > 0 else 0.0)
        worst = min(margins)
        report.check(f"holder inequality ({u.label})", worst >= -HOLDER_SLACK, f"worst margin {worst:.3e}")
        _trend(report, f"rescaled gap decreasing ({u.label})", report.gaps("rescaled_integral", u.label))
    return _finish(report, started)


# -- two bubbles ----------------------------------------------------------------------

def two_bubble_study(pair: ExponentPair, n_values: Sequence[int] = DEFAULT_N_VALUES,
                     quad: Optional[QuadratureSpec] = None,
                     phi: Optional[RadialProfile] = None, psi: Optional[RadialProfile] = None,
                     workers: int = 1) -> ExperimentReport:
    """
    C_n -> 1 and int |u_n|^{p*} -> int |phi|^{p*} + int |psi|^{p*}.

    int F_p(u_n) is reported against int F_p(phi) + leading int |psi|^{p*},
    the limit the splitting F_p = leading |s|^{p*} + T_p suggests.
    """
    started = time.perf_counter()
    quad = quad or QuadratureSpec()
    spec = SweepSpec(pair.N, tuple(n_values), quad)
    phi = phi or half_energy_tent(pair)
    psi = psi or half_energy_tent(pair)
    ev = FpEvaluator.for_pair(pair)
    N, p_star = pair.N, pair.p_star

    mass_phi = lq_integral(phi, p_star, N, quad)
    mass_psi = lq_integral(psi, p_star, N, quad)
    target_mass = mass_phi + mass_psi
    target_f = integrate_f_p(phi, ev, quad) + ev.leading * mass_psi

    def evaluate(n: float) -> tuple:
        parts = two_bubble_parts(pair, int(n), phi, psi, quad)
        u = parts.profile
        return (parts.C_n, grad_p_norm(u, pair, quad), lq_integral(u, p_star, N, quad),
                integrate_f_p(u, ev, quad))

    logger.info(f"🚀 two-bubble: N={N}, p={pair.p:g}, n in {list(spec.grid)}")
    results = parallel_map(_guarded(evaluate), spec.grid, workers)

    report = ExperimentReport("two-bubble", metadata=spec.metadata())
    report.metadata.update({"p": pair.p, "phi": phi.label, "psi": psi.label})
    for n, (c_n, norm, mass, f) in _until_failure(report, spec.grid, results):
        report.add("C_n", "two-bubble", n, c_n, 1.0)
        report.add("grad_norm", "two-bubble", n, norm, 1.0)
        report.add("lpstar_integral", "two-bubble", n, mass, target_mass)
        report.add("f_p_integral", "two-bubble", n, f, target_f)

    _trend(report, "C_n gap decreasing", report.gaps("C_n"))
    _trend(report, "lpstar gap decreasing", report.gaps("lpstar_integral"))
    worst = max(report.gaps("grad_norm"))
    report.check("unit gradient norm", worst <= TOLERANCES["two_bubble_unit_norm"], f"max deviation {worst:.3e}")
    return _finish(report, started)


# -- randomized verification ---------------------------------------------------------

def default_sandwich_pairs() -> List[ExponentPair]:
    """Twenty pairs with N in 2..5 spread across (2N/(N+1), N)"""
    pairs = []
    for N in range(2, 6):
        low = 2.0 * N / (N + 1.0)
        pairs.extend(ExponentPair(N, low + f * (N - low)) for f in SANDWICH_FRACTIONS)
    return pairs


def random_profile(rng: np.random.Generator, min_knots: int = 3, max_knots: int = 30) -> RadialProfile:
    """Piecewise-linear with uniform random knots, values in (-1, 1), zero at r = 1"""
    count = int(rng.integers(min_knots, max_knots + 1))
    interior = rng.uniform(0.0, 1.0, count - 2)
    knots = np.unique(np.concatenate([[0.0, 1.0], interior]))
    values = rng.uniform(-1.0, 1.0, knots.size)
    values[-1] = 0.0
    return RadialProfile.piecewise_linear(knots, values, label="random")


def _elementary_trials(rng: np.random.Generator, trials: int) -> List[Callable[[], float]]:
    a = 10.0 ** rng.uniform(-3.0, 3.0, trials)
    b = 10.0 ** rng.uniform(-3.0, 3.0, trials)
    g = 1.0 + rng.uniform(1e-3, 9.0, trials)

    def trial(i: int) -> Callable[[], float]:
        def run() -> float:
            lower, upper = elementary_power_bounds(a[i], b[i], g[i])
            value = (a[i] + b[i]) ** g[i]
            return min((value - lower) / value, (upper - value) / upper)
        return run

    return [trial(i) for i in range(trials)]


def _sandwich_trials(rng: np.random.Generator, trials: int,
                     pairs: Sequence[ExponentPair]) -> List[Callable[[], float]]:
    evaluators = [FpEvaluator.for_pair(pair) for pair in pairs]
    exponents = rng.uniform(-6.0, 0.0, trials)
    signs = rng.choice([-1.0, 1.0], trials)

    def s_max(ev: FpEvaluator) -> float:
        g = ev.gamma_exp
        return math.exp((math.log(math.expm1(SANDWICH_LOG_CAP / g)) - ev.log_coef) / ev.pair.p_conj)

    caps = [s_max(ev) for ev in evaluators]

    def trial(i: int) -> Callable[[], float]:
        j = i % len(evaluators)
        s = signs[i] * caps[j] * 10.0 ** exponents[i]

        def run() -> float:
            lower, value, upper = evaluators[j].sandwich(s)
            return min((value - lower) / value, (upper - value) / upper)
        return run

    return [trial(i) for i in range(trials)]


def _radial_lemma_trials(rng: np.random.Generator, trials: int,
                         quad: QuadratureSpec) -> List[Callable[[], float]]:
    runs = []
    for _ in range(trials):
        N = int(rng.integers(2, 6))
        p = float(rng.uniform(1.05, N - 0.05))
        profile = random_profile(rng)
        radii = np.sort(rng.uniform(0.01, 0.99, 10))

        def run(pair=ExponentPair(N, p), profile=profile, radii=radii) -> float:
            return radial_lemma_check(profile, pair, radii, quad).worst_margin
        runs.append(run)
    return runs


def _alvino_trials(rng: np.random.Generator, trials: int,
                   quad: QuadratureSpec) -> List[Callable[[], float]]:
    tolerance = TOLERANCES["alvino_consistency"]
    runs = []
    for _ in range(trials):
        N = int(rng.integers(2, 6))
        r = float(rng.uniform(0.1, 0.9))
        profile = random_profile(rng)

        def run(N=N, r=r, profile=profile) -> float:
            near = ExponentPair(N, N - 1e-6)
            limit = float(alvino_bound(r, N, 1.0))
            drift = abs(float(pradial_bound(r, near, 1.0)) - limit) / limit
            norm_N = gradient_norm(profile, N, N, quad)
            value = abs(float(profile.value(np.array([r]))[0]))
            inequality = 1.0 - value / float(alvino_bound(r, N, norm_N))
            return min(1.0 - drift / tolerance, inequality)
        runs.append(run)
    return runs


def verify_suite(name: str, trials: int, seed: int, pairs: Optional[Sequence[ExponentPair]] = None,
                 quad: Optional[QuadratureSpec] = None, workers: int = 1) -> ExperimentReport:
    """
    Run a randomized inequality check; passes iff every margin is >= -1e-9.

    Margins are relative distances to the violated side, so 0 means equality.
    """
    started = time.perf_counter()
    if name not in SUITES:
        raise DomainViolation(f"unknown suite {name!r}; choose one of {', '.join(SUITES)}")
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise DomainViolation(f"trials must be a positive integer, got {trials!r}")
    trials = int(trials)
    quad = quad or QuadratureSpec()
    rng = np.random.default_rng(seed)

    if name == "elementary":
        runs = _elementary_trials(rng, trials)
    elif name == "sandwich":
        pairs = list(pairs) if pairs else default_sandwich_pairs()
        for pair in pairs:
            pair.require_concentration_regime("sandwich suite")
        runs = _sandwich_trials(rng, trials, pairs)
    elif name == "radial-lemma":
        runs = _radial_lemma_trials(rng, trials, quad)
    else:
        runs = _alvino_trials(rng, trials, quad)

    logger.info(f"🧪 verify {name}: {trials} trials, seed {seed}")
    margins = parallel_map(_guarded(lambda run: run()), runs, workers)

    report = ExperimentReport(f"verify-{name}", metadata={"suite": name, "trials": trials, "seed": seed})
    for i, margin in _until_failure(report, range(len(margins)), margins):
        report.add("margin", name, i, margin, None)
    worst = float(min(margins))
    failures = sum(1 for m in margins if not m >= -VERIFY_SLACK)
    report.metadata.update({"worst_margin": worst, "failures": failures})
    report.check(f"{name} margins >= -{VERIFY_SLACK:g}", failures == 0,
                 f"worst margin {worst:.3e}, {failures} failures")
    return _finish(report, started)
