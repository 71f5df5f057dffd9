#!/usr/bin/env python3
"""
Moser-Trudinger Lab - Radial Profile and Quadrature Tests
=========================================================
"""

import math

import numpy as np
from pytest import mark, raises
from hypothesis import given, settings
from hypothesis.strategies import floats, integers

from mtlab.constants import ExponentPair, ball_volume, sobolev_constant
from mtlab.errors import DegenerateProfile, DomainViolation
from mtlab.experiments import random_profile
from mtlab.families import make_moser
from mtlab.functional import FpEvaluator
from mtlab.radial import (
    QuadratureSpec,
    RadialProfile,
    alvino_bound,
    ball_integral,
    grad_p_norm,
    gradient_norm,
    holder_step_bound,
    integrate_f_p,
    integrate_h,
    integrate_mt,
    lq_integral,
    lq_norm,
    panel_edges,
    pradial_bound,
    quadrature_nodes,
    radial_lemma_check,
)

QUAD = QuadratureSpec()
TENT = RadialProfile.piecewise_linear([0.0, 1.0], [1.0, 0.0], label="tent")
ZERO = RadialProfile.piecewise_linear([0.0, 1.0], [0.0, 0.0], label="zero")
ANALYTIC_TENT = RadialProfile.analytic(lambda r: np.clip(1.0 - np.asarray(r), 0.0, None),
                                       lambda r: np.where(np.asarray(r) < 1.0, -1.0, 0.0), label="tent")


@mark.parametrize("kwargs", ({"panels": 0}, {"nodes_per_panel": 1}, {"nodes_per_panel": 65},
                             {"grading": 0.5}, {"cutoff": 0.0}, {"cutoff": 1.0}))
def test_quadrature_spec_validation(kwargs):
    with raises(DomainViolation):
        QuadratureSpec(**kwargs)


def test_panel_edges_are_graded_and_refined():
    edges = panel_edges(QUAD, 1.0, (0.3, 0.7))
    assert edges[0] == 0.0 and edges[-1] == 1.0
    assert np.all(np.diff(edges) > 0)
    assert 0.3 in edges and 0.7 in edges
    positive = edges[1:]
    floor = QUAD.cutoff
    ratios = positive[1:] / positive[:-1]
    assert np.all(ratios[positive[:-1] >= floor] <= 2.0 + 1e-12)


def test_quadrature_nodes_are_cached_and_read_only():
    r, w = quadrature_nodes(QUAD, 1.0, ())
    assert quadrature_nodes(QUAD, 1.0, ())[0] is r
    assert not r.flags.writeable and not w.flags.writeable
    assert math.isclose(float(np.sum(w)), 1.0, rel_tol=1e-13)


@mark.parametrize("N", range(1, 7))
def test_ball_integral_of_one_is_the_volume(N):
    assert math.isclose(ball_integral(lambda r: np.ones_like(r), N, QUAD), ball_volume(N), rel_tol=1e-13)


def test_ball_integral_of_a_power():
    # 4 pi int_0^1 r^4 dr
    assert math.isclose(ball_integral(lambda r: r ** 2, 3, QUAD), 4.0 * math.pi / 5.0, rel_tol=1e-13)


def test_piecewise_linear_validation():
    with raises(DomainViolation):
        RadialProfile.piecewise_linear([0.0, 1.0], [1.0, 0.5])
    with raises(DomainViolation):
        RadialProfile.piecewise_linear([0.1, 1.0], [1.0, 0.0])
    with raises(DomainViolation):
        RadialProfile.piecewise_linear([0.0, 0.5, 0.5, 1.0], [1.0, 0.5, 0.4, 0.0])
    with raises(DomainViolation):
        RadialProfile.piecewise_linear([0.0, 1.0], [math.nan, 0.0])
    with raises(DomainViolation):
        RadialProfile.analytic(lambda r: 1.0 - 0.5 * np.asarray(r), lambda r: -0.5 + 0 * np.asarray(r))


def test_piecewise_linear_evaluation():
    u = RadialProfile.piecewise_linear([0.0, 0.5, 1.0], [2.0, 1.0, 0.0])
    np.testing.assert_allclose(u.value(np.array([0.0, 0.25, 0.5, 1.0, 1.5])), [2.0, 1.5, 1.0, 0.0, 0.0])
    np.testing.assert_allclose(u.derivative(np.array([0.1, 0.6, 1.0, 2.0])), [-2.0, -2.0, 0.0, 0.0])
    np.testing.assert_allclose(u.slopes, [-2.0, -2.0])


@mark.parametrize("N", (2, 3, 5))
@mark.parametrize("q", (1.2, 2.0, 4.5))
def test_tent_gradient_norm_is_exact(N, q):
    expected = ball_volume(N) ** (1.0 / q)
    assert math.isclose(gradient_norm(TENT, q, N, QUAD), expected, rel_tol=1e-14)
    assert math.isclose(gradient_norm(ANALYTIC_TENT, q, N, QUAD), expected, rel_tol=1e-12)


@mark.parametrize("radius", (0.5, 0.1, 0.01))
def test_ball_restricted_gradient_norm(radius):
    expected = (ball_volume(2) * radius ** 2) ** (1.0 / 1.5)
    assert math.isclose(gradient_norm(TENT, 1.5, 2, QUAD, radius=radius), expected, rel_tol=1e-13)
    assert math.isclose(gradient_norm(ANALYTIC_TENT, 1.5, 2, QUAD, radius=radius), expected, rel_tol=1e-11)


def test_gradient_norm_domain():
    with raises(DomainViolation):
        gradient_norm(TENT, 0.5, 2, QUAD)
    with raises(DomainViolation):
        gradient_norm(TENT, 2.0, 2, QUAD, radius=1.5)


@settings(max_examples=50, deadline=None)
@given(floats(min_value=0.1, max_value=10.0))
def test_scaling_is_linear_in_the_gradient_norm(c):
    pair = ExponentPair(3, 2.0)
    assert math.isclose(grad_p_norm(TENT.scaled(c), pair, QUAD), c * grad_p_norm(TENT, pair, QUAD), rel_tol=1e-13)


def test_lebesgue_norms_of_the_tent():
    # 2 pi int_0^1 r (1-r)^2 dr
    assert math.isclose(lq_norm(TENT, 2.0, 2, QUAD) ** 2, math.pi / 6.0, rel_tol=1e-13)
    assert math.isclose(lq_integral(TENT, 2.0, 2, QUAD), math.pi / 6.0, rel_tol=1e-13)


def test_integrals_of_the_zero_profile():
    ev = FpEvaluator.for_pair(ExponentPair(2, 1.5))
    assert math.isclose(integrate_f_p(ZERO, ev, QUAD), math.pi, rel_tol=1e-13)
    assert math.isclose(integrate_mt(ZERO, 2, QUAD), math.pi, rel_tol=1e-13)
    assert integrate_h(ZERO, ev, QUAD) == 0.0


def test_holder_step_and_radial_bound_agree():
    pair = ExponentPair(3, 2.2)
    r = np.linspace(0.05, 0.95, 19)
    np.testing.assert_allclose(holder_step_bound(r, pair, 1.3), pradial_bound(r, pair, 1.3), rtol=1e-12)


@mark.parametrize("N p".split(), ((2, 1.5), (3, 2.9), (4, 1.2)))
def test_radial_bound_is_the_f_p_level_set(N, p):
    pair = ExponentPair(N, p)
    ev = FpEvaluator.for_pair(pair)
    r = np.array([0.01, 0.1, 0.5, 0.9])
    np.testing.assert_allclose(ev.f_p(pradial_bound(r, pair, 1.0)), r ** -N, rtol=1e-10)


@mark.parametrize("N", (2, 3, 4))
def test_radial_bound_tends_to_alvino(N):
    pair = ExponentPair(N, N - 1e-6)
    r = np.linspace(0.1, 0.9, 9)
    np.testing.assert_allclose(pradial_bound(r, pair, 1.0), alvino_bound(r, N, 1.0), rtol=1e-3)


@mark.parametrize("N t".split(), ((2, 1.0), (3, 2.5), (4, 0.3)))
def test_moser_profile_attains_alvino_at_the_kink(N, t):
    u = make_moser(N, t)
    assert math.isclose(gradient_norm(u, N, N, QUAD), 1.0, rel_tol=1e-10)
    edge = math.exp(-t)
    value = float(u.value(np.array([edge]))[0])
    assert math.isclose(value, float(alvino_bound(edge, N, 1.0)), rel_tol=1e-12)
    inside = np.array([0.5 * edge, 0.5 * (edge + 1.0)])
    assert np.all(u.value(inside) < alvino_bound(inside, N, 1.0))


def test_radial_lemma_holds_for_the_tent():
    report = radial_lemma_check(TENT, ExponentPair(2, 1.5), [0.01, 0.2, 0.5, 0.99], QUAD)
    assert report.holds
    assert report.worst_margin > 0.0


@settings(max_examples=30, deadline=None)
@given(integers(min_value=0, max_value=2 ** 32 - 1))
def test_radial_lemma_holds_for_random_profiles(seed):
    rng = np.random.default_rng(seed)
    knots = np.unique(np.concatenate([[0.0, 1.0], rng.uniform(0.0, 1.0, 8)]))
    values = rng.uniform(-1.0, 1.0, knots.size)
    values[-1] = 0.0
    u = RadialProfile.piecewise_linear(knots, values)
    report = radial_lemma_check(u, ExponentPair(3, 2.0), rng.uniform(0.01, 0.99, 10), QUAD)
    assert report.holds


@settings(max_examples=30, deadline=None)
@given(integers(min_value=0, max_value=2 ** 32 - 1))
def test_sobolev_inequality_for_random_profiles(seed):
    rng = np.random.default_rng(seed)
    u = random_profile(rng)
    # zero extension past r = 1 keeps both norms, so the whole-space constant applies
    for pair in (ExponentPair(2, 1.5), ExponentPair(3, 2.0), ExponentPair(3, 2.9), ExponentPair(4, 1.2)):
        lhs = sobolev_constant(pair) * lq_norm(u, pair.p_star, pair.N, QUAD)
        assert lhs <= grad_p_norm(u, pair, QUAD) * (1.0 + 1e-9)


def test_radial_lemma_rejects_degenerate_profiles():
    with raises(DegenerateProfile):
        radial_lemma_check(ZERO, ExponentPair(2, 1.5), [0.5], QUAD)
    with raises(DomainViolation):
        radial_lemma_check(TENT, ExponentPair(2, 1.5), [0.0, 0.5], QUAD)
