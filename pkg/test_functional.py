#!/usr/bin/env python3
"""
Moser-Trudinger Lab - Pointwise Functional Tests
================================================
F_p, its two-sided estimate and the q-exponential form.
"""

import math

import numpy as np
from pytest import mark, raises
from hypothesis import given, settings
from hypothesis.strategies import floats

from mtlab.constants import ExponentPair, ball_volume
from mtlab.errors import DomainViolation, EvaluationOverflow, PreconditionViolation
from mtlab.functional import FpEvaluator, elementary_power_bounds, mt_integrand, q_exp

PLANE = FpEvaluator.for_pair(ExponentPair(2, 1.5))


def test_f_p_at_zero_is_one():
    assert PLANE.f_p(0.0) == 1.0
    assert PLANE.t_remainder(0.0) == 1.0
    assert PLANE.h_correction(0.0) == 0.0


def test_f_p_value_in_the_plane():
    # coef = 4 pi^2 and gamma = 2 at N = 2, p = 1.5
    assert math.isclose(PLANE.f_p(1.0), (1.0 + 4.0 * math.pi ** 2) ** 2, rel_tol=1e-13)
    assert math.isclose(PLANE.coef, 4.0 * math.pi ** 2, rel_tol=1e-13)
    assert math.isclose(PLANE.leading, 16.0 * math.pi ** 4, rel_tol=1e-13)


@given(floats(min_value=-50.0, max_value=50.0))
def test_f_p_is_even(s):
    assert PLANE.f_p(s) == PLANE.f_p(-s)


def test_f_p_is_increasing_in_absolute_value():
    s = np.linspace(0.0, 10.0, 200)
    values = PLANE.f_p(s)
    assert np.all(np.diff(values) > 0)


@mark.parametrize("ev", (PLANE, FpEvaluator.for_pair(ExponentPair(3, 2.5))))
def test_f_p_grows_like_its_leading_power(ev):
    pair = ev.pair
    gaps = []
    for s in (10.0, 100.0, 1000.0):
        ratio = math.exp(float(ev.log_f_p(s)) - float(ev.log_power_part(s)))
        # F_p(s) / (leading s^p*) = (1 + x)^gamma with x = s^{-p'} / coef
        x = s ** -pair.p_conj / ev.coef
        assert 1.0 - 1e-12 <= ratio <= 1.0 + pair.gamma_exp * x * math.exp(pair.gamma_exp * x) + 1e-12
        gaps.append(ratio - 1.0)
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-2 * gaps[0]


def test_array_inputs_keep_their_shape():
    s = np.array([[0.0, 0.5], [1.0, -2.0]])
    assert PLANE.f_p(s).shape == (2, 2)
    assert isinstance(PLANE.f_p(0.5), float)


@settings(max_examples=200, deadline=None)
@given(floats(min_value=1e-6, max_value=30.0))
def test_f_p_is_a_q_exponential(s):
    pair = PLANE.pair
    alpha = PLANE.consts.alpha_p
    expected = q_exp(PLANE.q_index, alpha * s ** pair.p_conj)
    assert math.isclose(PLANE.f_p(s), expected, rel_tol=1e-11)


@mark.parametrize("N p".split(), ((2, 1.5), (2, 1.9), (3, 2.5), (4, 3.2), (5, 4.9)))
@settings(max_examples=60, deadline=None)
@given(s=floats(min_value=-5.0, max_value=5.0))
def test_sandwich_brackets_f_p(N, p, s):
    ev = FpEvaluator.for_pair(ExponentPair(N, p))
    lower, value, upper = ev.sandwich(s)
    assert lower <= value * (1.0 + 1e-12)
    assert value <= upper * (1.0 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(floats(min_value=0.0, max_value=10.0))
def test_t_remainder_lies_between_one_and_one_plus_h(s):
    remainder = PLANE.t_remainder(s)
    assert remainder >= 1.0 - 1e-9 * PLANE.f_p(s)
    assert remainder <= (1.0 + PLANE.h_correction(s)) * (1.0 + 1e-12)


def test_h_correction_requires_the_regime():
    ev = FpEvaluator.for_pair(ExponentPair(2, 1.2))
    assert math.isfinite(ev.f_p(1.0))
    with raises(PreconditionViolation):
        ev.h_correction(1.0)


@mark.parametrize("s", (0.3, 1.0, 2.0))
def test_rescaled_integrand_is_f_p_of_a_rescaled_argument(s):
    for p in (1.5, 1.9, 1.999):
        ev = FpEvaluator.for_pair(ExponentPair(2, p))
        scale = ball_volume(2) ** (1.0 / 2 - 1.0 / p)
        assert math.isclose(ev.rescaled_integrand(s), ev.f_p(s * scale), rel_tol=1e-12)


@mark.parametrize("s", (0.3, 1.0, 3.0))
def test_f_p_tends_to_the_moser_trudinger_integrand(s):
    target = mt_integrand(s, 2)
    gaps = [abs(FpEvaluator.for_pair(ExponentPair(2, 2.0 - 10.0 ** -k)).f_p(s) - target) for k in range(1, 7)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-2 * target


def test_mt_integrand_in_the_plane():
    assert math.isclose(mt_integrand(1.0, 2), math.exp(4.0 * math.pi), rel_tol=1e-13)
    assert mt_integrand(0.0, 3) == 1.0


def test_overflow_names_the_argument():
    with raises(EvaluationOverflow) as info:
        PLANE.f_p(1e60)
    assert info.value.argument == 1e60
    assert math.isfinite(PLANE.log_f_p(1e60))


@mark.parametrize("s", (math.nan, math.inf))
def test_non_finite_arguments_are_rejected(s):
    with raises(DomainViolation):
        PLANE.f_p(s)


def test_q_exp_recovers_the_exponential():
    assert math.isclose(q_exp(1.0 - 1e-9, 2.0), math.exp(2.0), rel_tol=1e-6)
    assert math.isclose(q_exp(0.5, 2.0), 4.0, rel_tol=1e-14)


@mark.parametrize("q r".split(), ((1.0, 1.0), (0.5, -1.0), (2.0, 1.0), (3.0, 0.6), (math.nan, 1.0)))
def test_q_exp_domain(q, r):
    with raises(DomainViolation):
        q_exp(q, r)


@settings(max_examples=300, deadline=None)
@given(floats(min_value=1e-3, max_value=1e3), floats(min_value=1e-3, max_value=1e3),
       floats(min_value=1.001, max_value=10.0))
def test_elementary_power_inequality(a, b, g):
    lower, upper = elementary_power_bounds(a, b, g)
    value = (a + b) ** g
    assert lower <= value * (1.0 + 1e-12)
    assert value <= upper * (1.0 + 1e-12)


@mark.parametrize("a b g".split(), ((0.0, 1.0, 2.0), (1.0, -1.0, 2.0), (1.0, 1.0, 1.0), (1.0, math.inf, 2.0)))
def test_elementary_power_bounds_domain(a, b, g):
    with raises(DomainViolation):
        elementary_power_bounds(a, b, g)
