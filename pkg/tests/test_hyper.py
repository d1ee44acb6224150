import math

import numpy as np
import pytest

from hyperquad import (
    INTERVAL,
    SPHERE,
    ExactnessError,
    Hyperinterpolant,
    basis_matrix,
    clenshaw_curtis,
    dim_poly_space,
    discrete_inner_product,
    evaluate,
    gauss_legendre,
    hyperinterpolate,
    l2_norm,
    mz_eta,
    sigma,
    tail,
    tensor_sphere_rule,
    truncate,
)
from hyperquad.analysis import l2_error
from hyperquad.experiments import abs_x, exp_neg_x2, wendland_test_function

from conftest import random_poly_coeffs


def poly_from_coeffs(domain, coeffs, n):
    return lambda x: basis_matrix(domain, n, x) @ coeffs


def identities(rule, n, k, f):
    """Both sides of each identity used in the stability argument, as (lhs, rhs) pairs."""
    ip = lambda u, v: discrete_inner_product(rule, u, v)
    fv = np.asarray(f(rule.nodes), dtype=float)
    hn = hyperinterpolate(rule, n, f)
    hk = truncate(hn, k)
    Ln = evaluate(hn, rule.nodes)
    Lk = evaluate(hk, rule.nodes)
    g = Ln - Lk
    s = sigma(rule, n, k, f)
    return {
        "b": (ip(Lk, Lk) + ip(fv - Lk, fv - Lk), ip(fv, fv)),
        "c": (ip(Lk, Lk) + ip(g, g), ip(Ln, Ln)),
        "d": (ip(fv - Ln, fv - Ln) + 2 * ip(fv, g), ip(fv - Lk, fv - Lk) + ip(g, g)),
        "equality": (ip(Lk, Lk) + ip(fv, g) + s + ip(fv - Ln, fv - Ln), ip(fv, fv)),
        "proof": (hn.l2_norm() ** 2, ip(Lk, Lk) + ip(fv, g)),
    }


INTERVAL_CASES = [
    (gauss_legendre(25), 40, 9),
    (clenshaw_curtis(50), 40, 9),
    (gauss_legendre(41), 40, 40),
    (clenshaw_curtis(31), 20, 10),
]


# -- inner product ----------------------------------------------------------------

def test_discrete_inner_product_examples():
    rule = gauss_legendre(5)
    ones = np.ones(5)
    assert discrete_inner_product(rule, ones, ones) == pytest.approx(2.0, abs=1e-14)
    B = basis_matrix(INTERVAL, 4, rule.nodes)
    assert abs(discrete_inner_product(rule, B[:, 2], B[:, 3])) <= 1e-14
    assert discrete_inner_product(rule, B[:, 4], B[:, 4]) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        discrete_inner_product(rule, ones, np.ones(4))


# -- construction ------------------------------------------------------------------

def test_basis_polynomial_reproduced():
    f = lambda x: basis_matrix(INTERVAL, 3, x)[:, 3]
    h = hyperinterpolate(gauss_legendre(25), 40, f)
    expected = np.zeros(41)
    expected[3] = 1.0
    assert np.max(np.abs(h.coeffs - expected)) <= 1e-12


def test_constant_on_sphere():
    h = hyperinterpolate(tensor_sphere_rule(30), 25, lambda p: np.ones(len(p)))
    assert h.coeffs[0] == pytest.approx(math.sqrt(4 * math.pi), abs=1e-12)
    assert np.max(np.abs(h.coeffs[1:])) <= 1e-12


def test_gauss_41_on_exp():
    h = hyperinterpolate(gauss_legendre(41), 40, exp_neg_x2)
    assert l2_error(h, exp_neg_x2, gauss_legendre(200)) <= 1e-14
    assert evaluate(h, 0.0) == pytest.approx(1.0, abs=1e-13)


def test_refuses_low_exactness():
    with pytest.raises(ExactnessError):
        hyperinterpolate(gauss_legendre(10), 40, exp_neg_x2)
    with pytest.warns(UserWarning):
        h = hyperinterpolate(gauss_legendre(10), 40, exp_neg_x2, force=True)
    assert len(h.coeffs) == 41


def test_samples_take_precedence():
    rule = gauss_legendre(12)
    fake = np.ones(12)
    h = hyperinterpolate(rule, 5, exp_neg_x2, samples=fake)
    assert h.coeffs[0] == pytest.approx(math.sqrt(2))


def test_deterministic():
    a = hyperinterpolate(clenshaw_curtis(50), 40, exp_neg_x2).coeffs
    b = hyperinterpolate(clenshaw_curtis(50), 40, exp_neg_x2).coeffs
    assert np.array_equal(a, b)


# -- evaluation and norms -------------------------------------------------------------

def test_evaluate_simple():
    e1 = np.zeros(4)
    e1[0] = 1.0
    h = Hyperinterpolant(INTERVAL, 3, e1, 7, "test")
    assert evaluate(h, 0.3) == pytest.approx(1 / math.sqrt(2))
    zero = Hyperinterpolant(INTERVAL, 3, np.zeros(4), 7, "test")
    assert evaluate(zero, 0.7) == 0.0


def test_l2_norm_parseval():
    h = Hyperinterpolant(INTERVAL, 3, np.array([3.0, 4.0, 0.0, 0.0]), 7, "test")
    assert l2_norm(h) == 5.0
    g = hyperinterpolate(clenshaw_curtis(50), 40, exp_neg_x2)
    ref = gauss_legendre(41)
    vals = evaluate(g, ref.nodes)
    assert g.l2_norm() == pytest.approx(math.sqrt(ref.integrate(vals**2)), abs=1e-11)


def test_truncate_and_tail():
    h = hyperinterpolate(clenshaw_curtis(50), 40, exp_neg_x2)
    assert truncate(h, 40) is h
    t0 = truncate(h, 0)
    assert t0.coeffs.tolist() == [h.coeffs[0]]
    k = 9
    assert h.l2_norm() ** 2 == pytest.approx(truncate(h, k).l2_norm() ** 2 + tail(h, k).l2_norm() ** 2,
                                             rel=1e-14)
    with pytest.raises(ValueError):
        truncate(h, 41)


# -- reproduction of polynomials --------------------------------------------------------

@pytest.mark.parametrize("domain,rule,n,k", [
    (INTERVAL, gauss_legendre(7), 10, 3),
    (INTERVAL, clenshaw_curtis(31), 20, 10),
    (INTERVAL, gauss_legendre(25), 40, 9),
    (SPHERE, tensor_sphere_rule(14), 10, 4),
    (SPHERE, tensor_sphere_rule(30, z_rule="clenshaw_curtis", n_lon=51), 25, 5),
])
def test_polynomials_in_pk_are_reproduced(rng, domain, rule, n, k):
    B = basis_matrix(domain, n, rule.nodes)
    for _ in range(20):
        c = random_poly_coeffs(rng, domain, k, n)
        h = hyperinterpolate(rule, n, samples=B @ c)
        assert np.max(np.abs(h.coeffs - c)) <= 1e-10 * max(1.0, np.linalg.norm(c))


def test_idempotence(rng):
    rule, n, k = clenshaw_curtis(50), 40, 9
    hn = hyperinterpolate(rule, n, exp_neg_x2)
    hk = truncate(hn, k)
    # L_n(L_k f) = L_k f
    again = hyperinterpolate(rule, n, samples=evaluate(hk, rule.nodes))
    assert np.max(np.abs(again.coeffs[: k + 1] - hk.coeffs)) <= 1e-10
    assert np.max(np.abs(again.coeffs[k + 1:])) <= 1e-10
    # L_k(L_k f) = L_k f
    twice = hyperinterpolate(rule, k, samples=evaluate(hk, rule.nodes))
    assert np.max(np.abs(twice.coeffs - hk.coeffs)) <= 1e-10


# -- the identities --------------------------------------------------------------------

@pytest.mark.parametrize("rule,n,k", INTERVAL_CASES, ids=lambda v: getattr(v, "label", str(v)))
@pytest.mark.parametrize("f", [exp_neg_x2, abs_x], ids=["exp", "abs"])
def test_orthogonality_to_pk(rng, rule, n, k, f):
    hn = hyperinterpolate(rule, n, f)
    fv = f(rule.nodes)
    Ln = evaluate(hn, rule.nodes)
    Lk = evaluate(truncate(hn, k), rule.nodes)
    B = basis_matrix(INTERVAL, k, rule.nodes)
    for _ in range(20):
        chi = B @ rng.standard_normal(k + 1)
        assert abs(discrete_inner_product(rule, fv - Lk, chi)) <= 1e-10
        assert abs(discrete_inner_product(rule, fv - Ln, chi)) <= 1e-10


@pytest.mark.parametrize("rule,n,k", INTERVAL_CASES, ids=lambda v: getattr(v, "label", str(v)))
@pytest.mark.parametrize("f", [exp_neg_x2, abs_x], ids=["exp", "abs"])
def test_norm_identities_interval(rule, n, k, f):
    for name, (lhs, rhs) in identities(rule, n, k, f).items():
        assert abs(lhs - rhs) <= 1e-9 * max(abs(rhs), 1.0), name


@pytest.mark.parametrize("rule,n,k", [
    (tensor_sphere_rule(30, z_rule="clenshaw_curtis", n_lon=51), 25, 5),
    (tensor_sphere_rule(50), 25, 25),
    (tensor_sphere_rule(20), 12, 8),
], ids=["cc30", "g50", "g20"])
def test_norm_identities_sphere(rule, n, k):
    for name, (lhs, rhs) in identities(rule, n, k, wendland_test_function).items():
        assert abs(lhs - rhs) <= 1e-9 * max(abs(rhs), 1.0), name


# -- sigma -----------------------------------------------------------------------------

def test_sigma_zero_cases():
    assert abs(sigma(gauss_legendre(41), 40, 20, exp_neg_x2)) <= 1e-12
    assert sigma(clenshaw_curtis(50), 9, 9, exp_neg_x2) == 0.0


def test_sigma_bounded_by_eta():
    rule, n, k = clenshaw_curtis(50), 40, 9
    s = sigma(rule, n, k, exp_neg_x2)
    eta = mz_eta(rule, n).eta
    g = tail(hyperinterpolate(rule, n, exp_neg_x2), k)
    assert abs(s) <= eta * g.l2_norm() ** 2


def test_sigma_needs_exactness_n_plus_k():
    with pytest.raises(ExactnessError):
        sigma(gauss_legendre(25), 40, 10, exp_neg_x2)


def test_coeff_dimension_check():
    with pytest.raises(ValueError):
        Hyperinterpolant(SPHERE, 2, np.zeros(dim_poly_space(SPHERE, 2) + 1), 4, "x")
