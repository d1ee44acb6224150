import math

import numpy as np
import pytest

from hyperquad import (
    INTERVAL,
    ExactnessError,
    basis_matrix,
    clenshaw_curtis,
    gauss_legendre,
    hyperinterpolate,
    mz_eta,
    product_integral,
    product_weights,
)
from hyperquad.analysis import best_uniform_upper, error_bound
from hyperquad.bases import constant_moments
from hyperquad.experiments import exp_neg_x2
from hyperquad.product import moments_by_quadrature, product_integral_by_coefficients

ERF_INTEGRAL = math.sqrt(math.pi) * math.erf(1.0)


def test_constant_weight_gives_plain_weights():
    rule = clenshaw_curtis(50)
    pw = product_weights(rule, 40, constant_moments(INTERVAL, 40))
    assert np.max(np.abs(pw.weights - rule.weights)) <= 1e-14
    assert len(pw.weights) == rule.m
    assert pw.rule_id == rule.label


def test_basis_weight():
    rule = gauss_legendre(25)
    mom = np.zeros(41)
    mom[2] = 1.0
    pw = product_weights(rule, 40, mom)
    p2 = basis_matrix(INTERVAL, 2, rule.nodes)[:, 2]
    assert float(pw.weights @ p2) == pytest.approx(1.0, abs=1e-12)


def test_zero_moments():
    pw = product_weights(gauss_legendre(25), 40, np.zeros(41))
    assert not np.any(pw.weights)
    assert product_integral(pw, exp_neg_x2) == 0.0


def test_exp_integral():
    # the 200-point Gauss oracle agrees with the closed form
    ref = gauss_legendre(200)
    assert ref.integrate(exp_neg_x2(ref.nodes)) == pytest.approx(ERF_INTEGRAL, abs=1e-15)
    pw = product_weights(gauss_legendre(25), 40, constant_moments(INTERVAL, 40))
    assert product_integral(pw, exp_neg_x2) == pytest.approx(1.493648265624854, abs=1e-10)


def test_two_readings_agree(rng):
    rule = clenshaw_curtis(50)
    mom = rng.standard_normal(41)
    pw = product_weights(rule, 40, mom)
    a = product_integral(pw, exp_neg_x2)
    b = product_integral_by_coefficients(pw, exp_neg_x2)
    assert a == pytest.approx(b, rel=1e-10)


def test_polynomial_f_with_smooth_weight(rng):
    rule = gauss_legendre(25)
    h = lambda x: np.cos(3 * x) + 2
    mom = moments_by_quadrature(h, 40, gauss_legendre(60))
    pw = product_weights(rule, 40, mom)
    c = np.zeros(41)
    c[:10] = rng.standard_normal(10)
    f = lambda x: basis_matrix(INTERVAL, 40, x) @ c
    assert product_integral(pw, f) == pytest.approx(float(c @ mom), abs=1e-11)


def test_consistency_with_plain_quadrature():
    rule = clenshaw_curtis(50)
    pw = product_weights(rule, 40, constant_moments(INTERVAL, 40))
    h = hyperinterpolate(rule, 40, exp_neg_x2)
    plain = rule.integrate(h(rule.nodes))
    assert product_integral(pw, exp_neg_x2) == pytest.approx(plain, rel=1e-11)


def test_product_error_bound_clenshaw_curtis():
    rule, n, k = clenshaw_curtis(50), 40, 9
    pw = product_weights(rule, n, constant_moments(INTERVAL, n))
    err = abs(product_integral(pw, exp_neg_x2) - ERF_INTEGRAL)
    eta = mz_eta(rule, n).eta
    h_norm = math.sqrt(2.0)
    assert err <= error_bound(eta, 2.0, best_uniform_upper(exp_neg_x2, k, INTERVAL), h_norm)


def test_length_and_exactness_checks():
    with pytest.raises(ValueError):
        product_weights(gauss_legendre(25), 40, np.zeros(40))
    with pytest.raises(ExactnessError):
        product_weights(gauss_legendre(10), 40, np.zeros(41))
