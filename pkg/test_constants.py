#!/usr/bin/env python3
"""
Moser-Trudinger Lab - Constants Tests
=====================================
Exponent bookkeeping, closed-form constants and the M_p -> CC(N) limit.
"""

import math

import mpmath
from pytest import mark, raises
from hypothesis import given, settings
from hypothesis.strategies import floats, integers

from mtlab.constants import (
    ExponentPair,
    alpha_n,
    alpha_p,
    ball_volume,
    carleson_chang_limit,
    concentration_level,
    concentration_level_gamma_form,
    gamma_ratio_exponent,
    log_gamma_shift,
    mp_gap_bound,
    mp_leading_gap,
    paper_constants,
    sobolev_constant,
    surface_measure,
)
from mtlab.errors import DomainViolation, PreconditionViolation
from mtlab.specfun import harmonic

mpmath.mp.dps = 30


def test_exponent_pair_derived_exponents():
    pair = ExponentPair(2, 1.5)
    assert pair.p_star == 6.0
    assert pair.p_conj == 3.0
    assert pair.gamma_exp == 2.0
    assert pair.prop21_valid
    assert math.isclose(pair.t, 1.0 / 3.0)


@mark.parametrize("N p".split(), ((2, 2.5), (2, 2.0), (2, 1.0), (1, 0.5), (3, math.nan), (0, 0.5)))
def test_exponent_pair_rejects_invalid_input(N, p):
    with raises(DomainViolation):
        ExponentPair(N, p)


def test_concentration_threshold_is_strict():
    assert not ExponentPair(2, 4.0 / 3.0).prop21_valid
    assert ExponentPair(2, 4.0 / 3.0 + 1e-9).prop21_valid


@mark.parametrize("N", range(1, 8))
def test_ball_volume_matches_oracle(N):
    expected = float(mpmath.pi ** (mpmath.mpf(N) / 2) / mpmath.gamma(mpmath.mpf(N) / 2 + 1))
    assert math.isclose(ball_volume(N), expected, rel_tol=1e-13)
    assert math.isclose(surface_measure(N), N * expected, rel_tol=1e-13)


def test_alpha_values_in_the_plane():
    assert math.isclose(alpha_n(2), 4.0 * math.pi, rel_tol=1e-14)
    assert math.isclose(alpha_p(ExponentPair(2, 1.5)), 8.0 * math.pi ** 2, rel_tol=1e-13)


def test_sobolev_constants():
    assert math.isclose(sobolev_constant(ExponentPair(2, 1.5)), 2.52616, rel_tol=1e-5)
    assert math.isclose(sobolev_constant(ExponentPair(3, 2.0)), 2.34039, rel_tol=1e-5)


def test_sobolev_constant_closed_form_in_three_dimensions():
    # S = sqrt(3 pi) (sqrt(pi)/4)^{1/3} at N = 3, p = 2
    expected = math.sqrt(3.0 * math.pi) * (math.sqrt(math.pi) / 4.0) ** (1.0 / 3.0)
    assert math.isclose(sobolev_constant(ExponentPair(3, 2.0)), expected, rel_tol=1e-12)


def test_concentration_level_in_the_plane():
    pair = ExponentPair(2, 1.5)
    # |B| + (4 pi^2)^2 S^{-6}
    expected = math.pi + 16.0 * math.pi ** 4 * sobolev_constant(pair) ** -6
    assert math.isclose(concentration_level(pair), expected, rel_tol=1e-12)
    assert math.isclose(concentration_level(pair), 9.1385, rel_tol=1e-4)


def test_concentration_level_requires_the_regime():
    pair = ExponentPair(2, 1.2)
    with raises(PreconditionViolation):
        concentration_level(pair)
    with raises(PreconditionViolation):
        concentration_level_gamma_form(pair)


@settings(max_examples=150, deadline=None)
@given(integers(min_value=2, max_value=8), floats(min_value=0.02, max_value=0.98))
def test_both_forms_of_concentration_level_agree(N, fraction):
    low = 2.0 * N / (N + 1.0)
    pair = ExponentPair(N, low + fraction * (N - low))
    a, b = concentration_level(pair), concentration_level_gamma_form(pair)
    assert abs(a - b) <= 1e-9 * b


@mark.parametrize("N p".split(), ((2, 1.5), (3, 2.0), (3, 2.9), (4, 3.5), (5, 4.99)))
def test_gamma_form_matches_oracle(N, p):
    pair = ExponentPair(N, p)
    N_, p_ = mpmath.mpf(N), mpmath.mpf(p)
    vol = mpmath.pi ** (N_ / 2) / mpmath.gamma(N_ / 2 + 1)
    ratio = mpmath.gamma(N_) / (mpmath.gamma(N_ / p_) * mpmath.gamma(N_ + 1 - N_ / p_))
    expected = float(vol + vol * ratio ** (p_ / (N_ - p_)))
    assert math.isclose(concentration_level_gamma_form(pair), expected, rel_tol=1e-11)


def test_carleson_chang_limit_in_the_plane():
    assert math.isclose(carleson_chang_limit(2), math.pi * (1.0 + math.e), rel_tol=1e-14)


@mark.parametrize("N", range(3, 7))
def test_carleson_chang_limit_matches_oracle(N):
    N_ = mpmath.mpf(N)
    vol = mpmath.pi ** (N_ / 2) / mpmath.gamma(N_ / 2 + 1)
    H = sum(mpmath.mpf(1) / k for k in range(1, N))
    assert math.isclose(carleson_chang_limit(N), float(vol * (1 + mpmath.e ** H)), rel_tol=1e-12)


@mark.parametrize("N", (2, 3, 4))
def test_concentration_level_tends_to_carleson_chang(N):
    cc = carleson_chang_limit(N)
    gaps = []
    for k in range(1, 6):
        pair = ExponentPair(N, N - 10.0 ** -k)
        m = concentration_level_gamma_form(pair)
        assert m < cc
        assert cc - m <= mp_gap_bound(pair)
        gaps.append(cc - m)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[3] < 1e-2


@mark.parametrize("N", (2, 3, 5))
def test_leading_gap_predicts_the_rate(N):
    pair = ExponentPair(N, N - 1e-4)
    gap = carleson_chang_limit(N) - concentration_level_gamma_form(pair)
    assert math.isclose(gap, mp_leading_gap(pair), rel_tol=1e-2)


def oracle_concentration_level(pair, digits=40):
    with mpmath.workdps(digits):
        N_, p_ = mpmath.mpf(pair.N), mpmath.mpf(pair.p)
        vol = mpmath.pi ** (N_ / 2) / mpmath.gamma(N_ / 2 + 1)
        ratio = mpmath.gamma(N_) / (mpmath.gamma(N_ / p_) * mpmath.gamma(N_ + 1 - N_ / p_))
        return float(vol + vol * ratio ** (p_ / (N_ - p_)))


@mark.parametrize("N", (2, 3, 4))
@mark.parametrize("delta", (1e-6, 1e-8))
def test_both_forms_stay_accurate_next_to_the_critical_exponent(N, delta):
    pair = ExponentPair(N, N - delta)
    expected = oracle_concentration_level(pair)
    sobolev_form, gamma_form = concentration_level(pair), concentration_level_gamma_form(pair)
    assert math.isclose(sobolev_form, expected, rel_tol=1e-12)
    assert math.isclose(gamma_form, expected, rel_tol=1e-12)
    assert abs(sobolev_form - gamma_form) <= 1e-12 * gamma_form

    cc = carleson_chang_limit(N)
    assert sobolev_form < cc and gamma_form < cc
    assert cc - gamma_form <= mp_gap_bound(pair)
    assert math.isclose(cc - gamma_form, mp_leading_gap(pair), rel_tol=1e-4)


@mark.parametrize("N", (2, 3, 5))
@mark.parametrize("t", (1e-9, 1e-4, 0.3, 0.7))
def test_log_gamma_shift_matches_oracle(N, t):
    with mpmath.workdps(40):
        t_ = mpmath.mpf(t)
        expected = float(mpmath.loggamma(1 + t_) + mpmath.loggamma(N - t_) - mpmath.loggamma(N))
    assert math.isclose(log_gamma_shift(N, t), expected, rel_tol=1e-12)



@mark.parametrize("N", (2, 3, 6))
def test_gamma_ratio_exponent_tends_to_harmonic_number(N):
    exponent = gamma_ratio_exponent(ExponentPair(N, N - 1e-6))
    assert abs(exponent - harmonic(N - 1)) < 1e-5


def test_paper_constants_row():
    row = paper_constants(ExponentPair(2, 1.5)).as_row()
    assert row["prop21_valid"] is True
    assert math.isclose(row["M_p"], row["M_p_gamma_form"], rel_tol=1e-9)
    assert list(row) == ["N", "p", "p_star", "p_conj", "gamma_exp", "vol_B", "omega", "alpha_N", "alpha_p",
                         "S_p", "M_p", "M_p_gamma_form", "cc_limit", "prop21_valid"]


def test_paper_constants_below_the_threshold():
    consts = paper_constants(ExponentPair(2, 1.2))
    assert consts.M_p is None
    assert consts.M_p_gamma_form is None
    assert consts.as_row()["prop21_valid"] is False
    assert consts.S_p > 0
