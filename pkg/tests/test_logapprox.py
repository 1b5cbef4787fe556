import math

import numpy as np

from qentropy.logapprox import (
    binom_abs_series_sum,
    certify,
    choose_exponent,
    degree_bound,
    f_power_log,
    multiplicative_factor_bound,
    taylor_poly_neg,
    taylor_poly_pos,
)


def test_choose_exponent_worked_value():
    # gamma = 2 and beta = 1/16 gives a = ln 2 / ln 16 = 1/4
    assert abs(choose_exponent(2.0, 1.0 / 16.0) - 0.25) < 1e-15


def test_f_power_log_worked_value():
    assert abs(f_power_log(0.5, 0.25) - 1.005012238432913) < 1e-12


def test_f_power_log_one_sided():
    for gamma in (1.5, 2.0, 3.0):
        for n in (64, 1024):
            beta = n ** (-1.0 / gamma ** 2)
            a = choose_exponent(gamma, beta)
            xs = np.linspace(beta, 1.0, 5000)
            f = f_power_log(xs, a)
            lg = np.log2(1.0 / xs)
            assert np.all(f >= lg - 1e-12)
            assert np.all(f <= gamma * lg + 1e-12)


def test_multiplicative_factor_bound():
    # f(x) / log2(1/x) <= x^{-a} on (0, 1)
    a = 0.25
    xs = np.linspace(1e-4, 0.999, 2000)
    ratio = f_power_log(xs, a) / np.log2(1.0 / xs)
    bound = np.array([multiplicative_factor_bound(a, x) for x in xs])
    assert np.all(ratio <= bound + 1e-12)


def test_taylor_pos_degree_one_exact():
    poly = taylor_poly_pos(1.0, 0.1, 1e-6)
    assert poly.degree == 1
    xs = np.linspace(-1.0, 1.0, 101)
    assert np.allclose([poly(x) for x in xs], np.abs(xs) / 2.0, atol=1e-15)


def test_taylor_pos_accuracy_and_boundedness():
    for c in (0.1, 0.25, 0.5):
        for delta in (0.05, 0.1, 0.25):
            poly = taylor_poly_pos(c, delta, 1e-3)
            rep = certify(poly, grid_points=4001)
            assert rep.sup_error <= 1e-3
            assert rep.max_abs <= 1.0 + 1e-12
            # target on [delta, 1] is x^c / 2 scaled by the stored normalization
            x = 0.5 * (1.0 + delta)
            assert abs(poly(x) - poly.normalization * x ** c) <= 1e-3


def test_taylor_neg_accuracy_and_boundedness():
    for c in (0.1, 0.25, 0.5):
        for delta in (0.05, 0.1, 0.25):
            poly = taylor_poly_neg(c, delta, 1e-3)
            rep = certify(poly, grid_points=4001)
            assert rep.sup_error <= 1e-3
            assert rep.max_abs <= 1.0 + 1e-12
            x = 0.5 * (1.0 + delta)
            assert abs(poly(x) - poly.normalization * x ** (-c)) <= 1e-3


def test_taylor_neg_delta_one_is_constant():
    poly = taylor_poly_neg(0.5, 1.0, 1e-4)
    assert poly.degree == 0
    assert abs(poly(1.0) - 0.5) < 1e-12


def test_even_symmetry():
    poly = taylor_poly_pos(0.5, 0.1, 1e-4)
    for x in (0.3, 0.77, 0.05):
        assert poly(-x) == poly(x)


def test_degree_within_bound():
    for c in (0.1, 0.25, 0.5):
        for delta in (0.05, 0.1, 0.25):
            for eps in (1e-2, 1e-3, 1e-4):
                cap = degree_bound(c, delta, eps)
                assert taylor_poly_pos(c, delta, eps).degree <= cap
                assert taylor_poly_neg(c, delta, eps).degree <= cap


def test_rescale_keeps_error_budget():
    # small c, small delta pushes the raw series above 1 near x = 0,
    # triggering the rescale path
    poly = taylor_poly_neg(0.5, 0.05, 1e-3)
    rep = certify(poly, grid_points=8001)
    if rep.rescaled:
        assert rep.scale > 1.0
    assert rep.max_abs <= 1.0 + 1e-12
    assert rep.sup_error <= 1e-3


def test_binom_abs_series_sum_converges_to_one():
    # sum_{k>=1} |binom(c, k)| = 1 for 0 < c <= 1; the tail decays like
    # k^{-c}, so convergence is slow for small c
    for c in (0.1, 0.5, 0.9):
        s_short = binom_abs_series_sum(c, 1000)
        s_long = binom_abs_series_sum(c, 100000)
        assert s_short < s_long <= 1.0 + 1e-12
    assert abs(binom_abs_series_sum(1.0, 10) - 1.0) < 1e-15


def test_cert_report_round_trip_record():
    poly = taylor_poly_pos(0.25, 0.1, 1e-3)
    certify(poly)
    rec = poly.to_record()
    assert rec["degree"] == poly.degree
    assert rec["sign"] == 1
    assert math.isfinite(rec["eps_cert"])
