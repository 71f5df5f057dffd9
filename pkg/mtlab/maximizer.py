"""
Moser-Trudinger Lab - Maximizer
===============================

Exploratory search for sup int_B F_p(u) over ||grad u||_p <= 1 among
piecewise-linear radial profiles.

F_p grows with |s|, so the supremum sits on the constraint sphere; every
candidate is rescaled to unit gradient norm before it is evaluated and the
search runs unconstrained over shapes. Ascent follows a central-difference
gradient and only accepts strict improvements, shrinking the step after a
rejection and widening it after a success. Several starts run in parallel
and the best one wins.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np

from .constants import ExponentPair, surface_measure
from .errors import DegenerateProfile, DomainViolation, EvaluationOverflow, QuadratureFailure
from .experiments import parallel_map
from .families import default_moser_t, make_modified_at, make_moser
from .functional import FpEvaluator
from .radial import QuadratureSpec, RadialProfile, grad_p_norm, integrate_f_p

logger = logging.getLogger(__name__)

INIT_FAMILIES = ("tent", "moser-like", "aubin-talenti", "random")
OUTCOMES = ("converged", "concentrating", "iteration-capped")
MAX_KNOTS = 256
MIN_STEP = 1e-12
# value above M_p reported as an excess
EXCESS_SLACK = 1e-3
STABILITY_THRESHOLD = 0.01


@dataclass(frozen=True)
class MaximizerConfig:
    knots: int = 32
    max_iters: int = 200
    step_init: float = 0.5
    step_shrink: float = 0.5
    tol: float = 1e-10
    seed: int = 0
    inits: tuple = INIT_FAMILIES
    knot_grading: float = 3.0
    at_epsilons: tuple = (1e-1, 3e-2, 1e-2)
    fd_step: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "inits", tuple(self.inits))
        object.__setattr__(self, "at_epsilons", tuple(float(e) for e in self.at_epsilons))
        self._validate()

    def _validate(self):
        if isinstance(self.knots, bool) or int(self.knots) != self.knots or not 3 <= self.knots <= MAX_KNOTS:
            raise DomainViolation(f"knots must be an integer in [3, {MAX_KNOTS}], got {self.knots!r}")
        if self.max_iters < 0:
            raise DomainViolation(f"max_iters must be >= 0, got {self.max_iters!r}")
        if not self.step_init > 0:
            raise DomainViolation(f"step_init must be positive, got {self.step_init!r}")
        if not 0.0 < self.step_shrink < 1.0:
            raise DomainViolation(f"step_shrink must lie in (0, 1), got {self.step_shrink!r}")
        if not self.tol > 0:
            raise DomainViolation(f"tol must be positive, got {self.tol!r}")
        if not self.fd_step > 0:
            raise DomainViolation(f"fd_step must be positive, got {self.fd_step!r}")
        if not self.knot_grading >= 1.0:
            raise DomainViolation(f"knot_grading must be >= 1, got {self.knot_grading!r}")
        if not self.inits:
            raise DomainViolation("at least one initialization is required")
        unknown = [name for name in self.inits if name not in INIT_FAMILIES]
        if unknown:
            raise DomainViolation(f"unknown initializations {unknown}; choose from {', '.join(INIT_FAMILIES)}")
        if "aubin-talenti" in self.inits:
            if not self.at_epsilons or not all(0.0 < e < 1.0 for e in self.at_epsilons):
                raise DomainViolation(f"at_epsilons must lie in (0, 1), got {self.at_epsilons!r}")

    def mesh(self) -> np.ndarray:
        """r_j = (j / (knots - 1))^knot_grading"""
        return knot_mesh(int(self.knots), self.knot_grading)


def knot_mesh(count: int, grading: float) -> np.ndarray:
    mesh = np.linspace(0.0, 1.0, count) ** grading
    mesh[0], mesh[-1] = 0.0, 1.0
    return mesh


class RescaledObjective:
    """v -> int_B F_p(v / ||grad v||_p) on a fixed knot mesh; the last value is pinned to 0"""

    def __init__(self, pair: ExponentPair, quad: QuadratureSpec, knots: np.ndarray):
        self.pair = pair
        self.quad = quad
        self.knots = np.asarray(knots, dtype=float)
        self.ev = FpEvaluator.for_pair(pair)

    def profile(self, values: np.ndarray, label: str = "candidate") -> RadialProfile:
        values = np.array(values, dtype=float)
        values[-1] = 0.0
        return RadialProfile.piecewise_linear(self.knots, values, label=label)

    def unit(self, values: np.ndarray) -> np.ndarray:
        """values rescaled so that the profile has ||grad||_p = 1"""
        u = self.profile(values)
        norm = grad_p_norm(u, self.pair, self.quad)
        if not (math.isfinite(norm) and norm > 0.0):
            raise DegenerateProfile(f"profile has gradient norm {norm!r}")
        return np.asarray(u.values) / norm

    def normalized(self, values: np.ndarray, label: str = "candidate") -> RadialProfile:
        return self.profile(self.unit(values), label)

    def __call__(self, values: np.ndarray) -> float:
        u = self.normalized(values)
        try:
            result = integrate_f_p(u, self.ev, self.quad)
        except (EvaluationOverflow, QuadratureFailure) as exc:
            raise EvaluationOverflow(f"objective is not finite at iterate {np.array2string(np.asarray(values))}",
                                     argument=np.array(values, dtype=float),
                                     radius=getattr(exc, "radius", None)) from exc
        return result

    def gradient(self, values: np.ndarray, h: float) -> np.ndarray:
        """Central differences with step h max(1, |v_j|); the pinned boundary entry stays 0"""
        values = np.array(values, dtype=float)
        self.unit(values)
        grad = np.zeros_like(values)
        for j in range(values.size - 1):
            step = h * max(1.0, abs(values[j]))
            up, down = values.copy(), values.copy()
            up[j] += step
            down[j] -= step
            grad[j] = (self(up) - self(down)) / (2.0 * step)
        return grad

    def half_energy_radius(self, values: np.ndarray) -> float:
        """Smallest knot radius enclosing half the gradient energy"""
        u = self.profile(values)
        N, p = self.pair.N, self.pair.p
        energy = surface_measure(N) * np.abs(u.slopes) ** p * np.diff(self.knots ** N) / N
        cumulative = np.cumsum(energy)
        index = int(np.searchsorted(cumulative, 0.5 * cumulative[-1]))
        return float(self.knots[min(index + 1, self.knots.size - 1)])

    def concentrating(self, values: np.ndarray) -> bool:
        return self.half_energy_radius(values) <= self.knots[1]


def finite_diff_gradient(values: Sequence[float], pair: ExponentPair, quad: QuadratureSpec, h: float,
                         knots: Optional[np.ndarray] = None, grading: float = 3.0) -> np.ndarray:
    """Central-difference gradient of v -> int F_p(v / ||grad v||_p) in the knot values"""
    if not h > 0:
        raise DomainViolation(f"finite difference step must be positive, got {h!r}")
    values = np.asarray(values, dtype=float)
    knots = knot_mesh(values.size, grading) if knots is None else np.asarray(knots, dtype=float)
    return RescaledObjective(pair, quad, knots).gradient(values, h)


@dataclass
class StartOutcome:
    label: str
    values: np.ndarray
    value: float
    iterations: int
    outcome: str
    trace: List[float] = field(default_factory=list)


class ProfileAscent:
    """Improvement-only gradient ascent on the unit sphere of one objective"""

    def __init__(self, objective: RescaledObjective, cfg: MaximizerConfig):
        self.objective = objective
        self.cfg = cfg
        self.logger = logging.getLogger(f"{__name__}.ProfileAscent")

    def _try_step(self, values: np.ndarray, direction: np.ndarray, step: float) -> Optional[np.ndarray]:
        candidate = values + step * float(np.max(np.abs(values))) * direction
        try:
            return self.objective.unit(candidate)
        except DegenerateProfile:
            return None

    def run(self, start: np.ndarray, label: str) -> StartOutcome:
        cfg, objective = self.cfg, self.objective
        values = objective.unit(start)
        value = objective(values)
        trace = [value]
        step = cfg.step_init
        outcome = "iteration-capped"
        iterations = 0

        for iteration in range(cfg.max_iters):
            if objective.concentrating(values):
                outcome = "concentrating"
                break
            grad = objective.gradient(values, cfg.fd_step)
            grad_norm = float(np.linalg.norm(grad))
            if not grad_norm > 0.0:
                outcome = "converged"
                break
            direction = grad / grad_norm

            accepted = None
            while step >= MIN_STEP:
                candidate = self._try_step(values, direction, step)
                if candidate is not None:
                    candidate_value = objective(candidate)
                    if candidate_value > value:
                        accepted = (candidate, candidate_value)
                        break
                step *= cfg.step_shrink
            iterations = iteration + 1
            if accepted is None:
                outcome = "converged"
                break

            gain = accepted[1] - value
            values, value = accepted
            trace.append(value)
            step = min(step / cfg.step_shrink, cfg.step_init)
            self.logger.debug(f"{label} iteration {iterations}: value {value:.12g}, step {step:.3e}")
            if gain < cfg.tol * max(1.0, abs(value)):
                outcome = "converged"
                break

        self.logger.info(f"🏁 {label}: {outcome} after {iterations} iterations, value {value:.10g}")
        return StartOutcome(label, values, value, iterations, outcome, trace)


@dataclass
class MaximizationResult:
    profile: RadialProfile
    value: float
    trace: List[float]
    starts: List[StartOutcome]
    winner: str
    best_w_eps: Optional[float]
    M_p: Optional[float]
    exceeds_M_p: bool

    def as_rows(self) -> List[dict]:
        """One row per start with the maximize table columns"""
        rows = []
        for start in self.starts:
            rows.append({
                "start": start.label,
                "value": start.value,
                "iterations": start.iterations,
                "outcome": start.outcome,
                "winner": start.label == self.winner,
                "best_w_eps": math.nan if self.best_w_eps is None else self.best_w_eps,
                "M_p": math.nan if self.M_p is None else self.M_p,
                "exceeds_M_p": self.M_p is not None and start.value > self.M_p + EXCESS_SLACK,
            })
        return rows


def _initial_values(name: str, objective: RescaledObjective, cfg: MaximizerConfig,
                    rng: np.random.Generator) -> tuple:
    """(values, best discretized W_eps value or None)"""
    knots = objective.knots
    pair = objective.pair
    if name == "tent":
        return 1.0 - knots, None
    if name == "moser-like":
        return np.asarray(make_moser(pair.N, default_moser_t(knots)).value(knots), dtype=float), None
    if name == "aubin-talenti":
        candidates = []
        for eps in cfg.at_epsilons:
            values = np.asarray(make_modified_at(pair, eps, objective.quad).value(knots), dtype=float)
            candidates.append((objective(values), values))
        best_value, best_values = max(candidates, key=lambda c: c[0])
        return best_values, best_value
    values = np.sort(rng.uniform(0.0, 1.0, knots.size))[::-1].copy()
    values[-1] = 0.0
    return values, None


def maximize(pair: ExponentPair, cfg: Optional[MaximizerConfig] = None,
             quad: Optional[QuadratureSpec] = None, workers: int = 1) -> MaximizationResult:
    """Best unit-norm profile across all starts, its int F_p and its objective trace"""
    cfg = cfg or MaximizerConfig()
    quad = quad or QuadratureSpec()
    objective = RescaledObjective(pair, quad, cfg.mesh())
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(cfg.inits))
    logger.info(f"🚀 maximize: N={pair.N}, p={pair.p:g}, {cfg.knots} knots, starts {', '.join(cfg.inits)}")

    def run_start(index: int) -> tuple:
        name = cfg.inits[index]
        values, w_eps = _initial_values(name, objective, cfg, np.random.default_rng(seeds[index]))
        return ProfileAscent(objective, cfg).run(values, name), w_eps

    results = parallel_map(run_start, range(len(cfg.inits)), workers)
    starts = [start for start, _ in results]
    w_eps_values = [w for _, w in results if w is not None]
    best = starts[int(np.argmax([start.value for start in starts]))]

    M_p = objective.ev.consts.M_p
    result = MaximizationResult(
        profile=objective.profile(best.values, label=f"maximizer({best.label})"),
        value=best.value,
        trace=best.trace,
        starts=starts,
        winner=best.label,
        best_w_eps=max(w_eps_values) if w_eps_values else None,
        M_p=M_p,
        exceeds_M_p=M_p is not None and best.value > M_p + EXCESS_SLACK,
    )
    if result.exceeds_M_p:
        logger.warning(f"⚠️ maximize: value {best.value:.10g} exceeds M_p = {M_p:.10g}")
    logger.info(f"✅ maximize: winner {best.label} ({best.outcome}), value {best.value:.10g}")
    return result


@dataclass(frozen=True)
class MeshStability:
    value_coarse: float
    value_fine: float
    relative_change: float
    stable: bool


def mesh_stability(pair: ExponentPair, cfg: Optional[MaximizerConfig] = None,
                   quad: Optional[QuadratureSpec] = None, workers: int = 1) -> MeshStability:
    """
    Re-optimize a 32-knot solution on 64 knots.

    A change of 1% or more is reported as a finding; concentration may be genuine.
    """
    cfg = cfg or MaximizerConfig()
    quad = quad or QuadratureSpec()
    coarse = maximize(pair, replace(cfg, knots=32), quad, workers)

    fine_cfg = replace(cfg, knots=64)
    objective = RescaledObjective(pair, quad, fine_cfg.mesh())
    start = np.asarray(coarse.profile.value(objective.knots), dtype=float)
    refined = ProfileAscent(objective, fine_cfg).run(start, f"{coarse.winner} refined")

    change = abs(refined.value - coarse.value) / coarse.value
    report = MeshStability(coarse.value, refined.value, change, change < STABILITY_THRESHOLD)
    if not report.stable:
        logger.warning(f"⚠️ mesh stability: value moved {change:.2%} from 32 to 64 knots")
    return report
