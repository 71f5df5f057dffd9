#!/usr/bin/env python3
"""
Moser-Trudinger Lab - Experiment Tests
======================================
Sweeps, studies, randomized suites and the report/trend helpers they use.
"""

import io
import json
import math

import numpy as np
import pandas as pd
from pytest import mark, raises

from mtlab.constants import ExponentPair
from mtlab.errors import DomainViolation, EvaluationOverflow, PreconditionViolation
from mtlab.experiments import (
    SUITES,
    SweepSpec,
    default_sandwich_pairs,
    limit_grid,
    parallel_map,
    pointwise_limit_study,
    random_profile,
    semicontinuity_study,
    sweep_concentration,
    sweep_mp_limit,
    two_bubble_study,
    verify_suite,
)
from mtlab.radial import RadialProfile
from mtlab.reports import REPORT_COLUMNS, ExperimentReport
from mtlab.trends import aitken_limit, convergence_ratios, decreasing_trend, empirical_orders

PLANE = ExponentPair(2, 1.5)


def check_names(report):
    return [check.name for check in report.checks]


# -- helpers -------------------------------------------------------------------------

def test_limit_grid():
    assert limit_grid(3, range(1, 4)) == [3 - 1e-1, 3 - 1e-2, 3 - 1e-3]


def test_parallel_map_keeps_order():
    items = list(range(40))
    assert parallel_map(lambda x: x * x, items, workers=4) == [x * x for x in items]
    assert parallel_map(lambda x: x, [], workers=4) == []


@mark.parametrize("grid", ((), (1.0, math.nan), (1.0, 2.0, 1.5), (1.0, 1.0)))
def test_sweep_spec_rejects_bad_grids(grid):
    with raises(DomainViolation):
        SweepSpec(2, grid)


def test_sweep_spec_accepts_either_direction():
    assert SweepSpec(2, (0.1, 0.01)).grid == (0.1, 0.01)
    assert SweepSpec(2, [2, 8]).metadata()["grid_size"] == 2


def test_decreasing_trend_allows_one_violation():
    assert decreasing_trend([4.0, 3.0, 2.0, 1.0]).passed
    assert decreasing_trend([4.0, 3.0, 3.5, 1.0]).passed
    verdict = decreasing_trend([4.0, 5.0, 6.0, 1.0])
    assert not verdict.passed and verdict.violations == 2
    assert not decreasing_trend([2.0, 1.0, 1.0], allowed_violations=0).passed
    assert decreasing_trend([2.0, 0.0, 0.0], allowed_violations=0).passed
    assert decreasing_trend([1.0]).passed
    assert not decreasing_trend([1.0, math.nan, 0.5], allowed_violations=1).passed


def test_empirical_orders_of_a_power_law():
    x = [1e-1, 1e-2, 1e-3]
    orders = empirical_orders(x, [v ** 2 for v in x])
    np.testing.assert_allclose(orders, [2.0, 2.0], rtol=1e-12)
    assert math.isnan(empirical_orders([1.0, 0.5], [0.0, 1.0])[0])


def test_aitken_recovers_a_geometric_limit():
    values = [3.0 + 0.5 ** k for k in range(6)]
    np.testing.assert_allclose(convergence_ratios(values), 2.0, rtol=1e-12)
    assert math.isclose(aitken_limit(values), 3.0, rel_tol=1e-12)
    assert math.isnan(aitken_limit([1.0, 2.0]))


def test_report_rows_and_serialization():
    report = ExperimentReport("demo")
    report.add("x", "a", 1.0, 2.5, 2.0)
    report.add("x", "a", 2.0, 0.1, None)
    frame = report.to_frame()
    assert list(frame.columns) == REPORT_COLUMNS
    assert math.isclose(frame["rel_gap"][0], 0.25)
    assert math.isnan(frame["target"][1])

    parsed = pd.read_csv(io.StringIO(report.to_csv()))
    assert parsed["computed"].tolist() == [2.5, 0.1]
    assert math.isnan(parsed["target"][1])

    records = json.loads(report.to_json())
    assert records[1]["target"] is None and records[1]["computed"] == 0.1


def test_report_equality_ignores_wall_time():
    a, b = ExperimentReport("demo"), ExperimentReport("demo")
    a.add("x", "a", 1.0, 1.0, 1.0)
    b.add("x", "a", 1.0, 1.0, 1.0)
    a.wall_time, b.wall_time = 1.0, 2.0
    assert a == b
    a.check("fails", False)
    assert not a.passed and [c.name for c in a.failed_checks] == ["fails"]


# -- M_p sweep ---------------------------------------------------------------------------

@mark.parametrize("N", (2, 3, 4))
def test_mp_sweep_passes(N):
    report = sweep_mp_limit(N, limit_grid(N, range(1, 6)))
    assert report.passed, report.failed_checks
    assert len(report.rows) == 25
    assert len(report.metadata["empirical_orders"]) == 4
    assert "forms agree" in check_names(report)
    extrapolated = report.metadata["extrapolated_limit"]
    last = report.select("M_p", "gamma_form")[-1]
    assert abs(extrapolated - last.target) < last.abs_gap


@mark.parametrize("N k_max".split(), ((2, 8), (3, 6), (4, 8)))
def test_mp_sweep_next_to_the_critical_exponent(N, k_max):
    report = sweep_mp_limit(N, limit_grid(N, range(1, k_max + 1)))
    assert report.passed, report.failed_checks
    pairs = zip(report.select("M_p", "sobolev_form"), report.select("M_p", "gamma_form"))
    assert all(abs(a.computed - b.computed) <= 1e-12 * b.computed for a, b in pairs)
    assert all(row.computed < row.target for row in report.select("M_p"))


def test_mp_sweep_is_independent_of_workers():
    grid = limit_grid(3, range(1, 6))
    assert sweep_mp_limit(3, grid, workers=1) == sweep_mp_limit(3, grid, workers=3)


def test_mp_sweep_overflow_carries_the_finished_rows(monkeypatch):
    from mtlab import experiments

    genuine = experiments.concentration_level_gamma_form

    def overflowing(pair):
        if pair.p > 1.9995:
            raise EvaluationOverflow("M_p overflows", argument=pair)
        return genuine(pair)

    monkeypatch.setattr(experiments, "concentration_level_gamma_form", overflowing)
    with raises(EvaluationOverflow) as info:
        sweep_mp_limit(2, limit_grid(2, range(1, 6)), workers=2)
    partial = info.value.partial
    assert isinstance(partial, ExperimentReport)
    assert [row.parameter for row in partial.select("M_p", "gamma_form")] == limit_grid(2, range(1, 4))
    assert len(partial.rows) == 15


def test_mp_sweep_requires_the_regime():
    with raises(PreconditionViolation):
        sweep_mp_limit(2, [1.2, 1.5])


# -- concentration along W_eps ---------------------------------------------------------

def test_concentration_sweep_passes():
    report = sweep_concentration(PLANE, (1e-1, 1e-2, 1e-3))
    assert report.passed, report.failed_checks
    names = check_names(report)
    assert "terminal lpstar gap" in names
    assert "terminal f_p gap" not in names
    assert "upper estimate M_p + int H" in names
    assert len(report.select("local_grad_norm")) == 9
    assert report.metadata["quadrature_drift"] < 1e-6


def test_concentration_sweep_reaches_the_terminal_f_p_check():
    report = sweep_concentration(PLANE, (1e-1, 1e-2, 1e-3, 1e-4))
    assert report.passed, report.failed_checks
    terminal = [check for check in report.checks if check.name == "terminal f_p gap"]
    assert len(terminal) == 1 and terminal[0].passed
    last = report.select("f_p_integral")[-1]
    assert last.parameter == 1e-4 and last.rel_gap <= 5e-2


def test_concentration_with_a_single_epsilon():
    report = sweep_concentration(ExponentPair(3, 2.5), [0.05])
    assert report.passed, report.failed_checks
    assert abs(report.select("grad_norm")[0].computed - 1.0) < 1e-8


def test_concentration_requires_the_regime():
    with raises(PreconditionViolation):
        sweep_concentration(ExponentPair(2, 1.2), [0.1])


@mark.parametrize("eps", ((1.5,), (0.0,), (0.1, 0.1)))
def test_concentration_rejects_bad_epsilons(eps):
    with raises(DomainViolation):
        sweep_concentration(PLANE, eps)


# -- pointwise limit and semicontinuity --------------------------------------------------

def test_pointwise_limit_study_passes():
    report = pointwise_limit_study(2)
    assert report.passed, report.failed_checks
    assert {row.series for row in report.select("f_p")} == {"s=0.3", "s=1", "s=3"}
    assert len(report.select("f_p_integral", "(1-r)/2")) == 6


def test_pointwise_limit_study_rejects_non_finite_s():
    with raises(DomainViolation):
        pointwise_limit_study(2, [1.0, math.inf])


def test_semicontinuity_study_passes():
    report = semicontinuity_study(2)
    assert report.passed, report.failed_checks
    assert "holder inequality (moser(t=1))" in check_names(report)
    # the zero profile sits on its target
    assert all(row.abs_gap == 0.0 for row in report.select("rescaled_integral", "zero"))


def test_semicontinuity_requires_the_unit_ball():
    tent = RadialProfile.piecewise_linear([0.0, 1.0], [1.0, 0.0], label="tent")
    with raises(PreconditionViolation):
        semicontinuity_study(2, profiles=[tent])


# -- two bubbles ---------------------------------------------------------------------

def test_two_bubble_study_passes():
    report = two_bubble_study(PLANE, (2, 8, 32))
    assert report.passed, report.failed_checks
    assert [row.parameter for row in report.select("C_n")] == [2.0, 8.0, 32.0]


# -- randomized suites -------------------------------------------------------------------

def test_default_sandwich_pairs():
    pairs = default_sandwich_pairs()
    assert len(pairs) == 20
    assert all(pair.prop21_valid for pair in pairs)


def test_random_profiles_vanish_on_the_boundary():
    rng = np.random.default_rng(7)
    for _ in range(20):
        profile = random_profile(rng)
        assert profile.values[-1] == 0.0
        assert 3 <= profile.knots.size <= 30


@mark.parametrize("name trials".split(), (("elementary", 500), ("sandwich", 500),
                                          ("radial-lemma", 40), ("alvino", 40)))
def test_suites_pass(name, trials):
    report = verify_suite(name, trials, seed=0)
    assert report.passed, report.failed_checks
    assert report.metadata["failures"] == 0
    assert len(report.rows) == trials


def test_suites_are_reproducible():
    for name in SUITES:
        assert verify_suite(name, 10, seed=3) == verify_suite(name, 10, seed=3, workers=2)


def test_unknown_suite_and_bad_trial_counts():
    with raises(DomainViolation):
        verify_suite("quadratic", 10, seed=0)
    with raises(DomainViolation):
        verify_suite("elementary", 0, seed=0)


def test_sandwich_suite_requires_the_regime():
    with raises(PreconditionViolation):
        verify_suite("sandwich", 5, seed=0, pairs=[ExponentPair(2, 1.2)])
