import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import sph_harm_y

from hyperquad import (
    INTERVAL,
    SPHERE,
    DomainError,
    basis_matrix,
    dim_poly_space,
    domain_from_name,
    eval_basis_vector,
    eval_legendre_normalized,
    eval_sph_harmonic,
    gauss_legendre,
    sphere_degree_order,
    sphere_flat_index,
    tensor_sphere_rule,
)
from hyperquad.bases import constant_moments

from conftest import random_unit_vectors


def test_dimensions():
    assert dim_poly_space(INTERVAL, 0) == 1
    assert dim_poly_space(INTERVAL, 40) == 41
    assert dim_poly_space(SPHERE, 25) == 676
    with pytest.raises(ValueError):
        dim_poly_space(INTERVAL, -1)


def test_domain_names():
    assert domain_from_name("interval") is INTERVAL
    assert domain_from_name("sphere") is SPHERE
    assert SPHERE.total_measure == pytest.approx(4 * math.pi)
    with pytest.raises(ValueError):
        domain_from_name("torus")


def test_legendre_known_values():
    assert eval_legendre_normalized(0, 0.3) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert eval_legendre_normalized(1, 1.0) == pytest.approx(math.sqrt(1.5), abs=1e-15)
    # P_2(0) = -1/2, scaled by sqrt(5/2)
    assert eval_legendre_normalized(2, 0.0) == pytest.approx(-0.5 * math.sqrt(2.5), abs=1e-15)


def test_legendre_against_numpy():
    x = np.linspace(-1, 1, 301)
    B = basis_matrix(INTERVAL, 30, x)
    for ell in range(31):
        ref = np.polynomial.legendre.Legendre.basis(ell)(x) * math.sqrt((2 * ell + 1) / 2)
        assert np.max(np.abs(B[:, ell] - ref)) < 1e-12


def test_legendre_orthonormal_under_gauss():
    rule = gauss_legendre(40)
    B = basis_matrix(INTERVAL, 39, rule.nodes)
    G = B.T @ (rule.weights[:, None] * B)
    assert np.max(np.abs(G - np.eye(40))) < 1e-13


def test_interval_domain_errors():
    with pytest.raises(DomainError):
        basis_matrix(INTERVAL, 3, [0.0, 1.5])
    with pytest.raises(DomainError):
        basis_matrix(INTERVAL, 3, [np.nan])
    # the endpoints themselves are fine
    assert basis_matrix(INTERVAL, 3, [-1.0, 1.0]).shape == (2, 4)


def test_flat_index_roundtrip():
    seen = set()
    for ell in range(30):
        for k in range(1, 2 * ell + 2):
            flat = sphere_flat_index(ell, k)
            assert sphere_degree_order(flat) == (ell, k)
            seen.add(flat)
    assert seen == set(range(1, 30 * 30 + 1))
    with pytest.raises(ValueError):
        sphere_flat_index(2, 6)
    with pytest.raises(ValueError):
        sphere_degree_order(0)


def _real_sph_harm_scipy(ell, m, theta, phi):
    # scipy's complex harmonics carry the Condon-Shortley phase; ours do not
    sign = (-1) ** abs(m)
    y = sph_harm_y(ell, abs(m), theta, phi)
    if m == 0:
        return y.real
    if m > 0:
        return math.sqrt(2) * sign * y.real
    return math.sqrt(2) * sign * y.imag


def test_sphere_harmonics_against_scipy(rng):
    pts = random_unit_vectors(rng, 50)
    theta = np.arccos(pts[:, 2])
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    B = basis_matrix(SPHERE, 12, pts)
    for ell in range(13):
        for m in range(-ell, ell + 1):
            col = sphere_flat_index(ell, m + ell + 1) - 1
            ref = _real_sph_harm_scipy(ell, m, theta, phi)
            assert np.max(np.abs(B[:, col] - ref)) < 1e-12, (ell, m)


def test_single_harmonic_matches_table():
    p = np.array([0.6, 0.0, 0.8])
    assert eval_sph_harmonic(2, 1, p) == pytest.approx(0.0, abs=1e-15)  # sin(2 phi) at phi = 0
    assert eval_sph_harmonic(0, 1, p) == pytest.approx(1 / math.sqrt(4 * math.pi))
    assert eval_basis_vector(SPHERE, 3, p)[sphere_flat_index(3, 5) - 1] == pytest.approx(
        eval_sph_harmonic(3, 5, p), abs=1e-15)


def test_sphere_orthonormal_under_tensor_rule():
    rule = tensor_sphere_rule(30)
    B = basis_matrix(SPHERE, 15, rule.nodes)
    G = B.T @ (rule.weights[:, None] * B)
    assert np.max(np.abs(G - np.eye(256))) < 1e-12


def test_addition_theorem(rng):
    # sum_m Y_lm(x)^2 = (2l+1)/(4 pi) at every point
    pts = random_unit_vectors(rng, 20)
    B = basis_matrix(SPHERE, 20, pts)
    for ell in range(21):
        block = B[:, ell * ell:(ell + 1) ** 2]
        assert np.allclose((block**2).sum(axis=1), (2 * ell + 1) / (4 * math.pi), atol=1e-12)


def test_poles_are_finite():
    B = basis_matrix(SPHERE, 30, [[0, 0, 1.0], [0, 0, -1.0]])
    assert np.all(np.isfinite(B))


def test_sphere_domain_errors():
    with pytest.raises(DomainError):
        basis_matrix(SPHERE, 2, [[1.0, 1.0, 0.0]])
    with pytest.raises(DomainError):
        basis_matrix(SPHERE, 2, [[1.0, 0.0]])


def test_constant_moments():
    mom = constant_moments(SPHERE, 3)
    assert mom[0] == pytest.approx(math.sqrt(4 * math.pi))
    assert not np.any(mom[1:])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 60), st.floats(-1, 1))
def test_legendre_bounded(ell, x):
    # |p_l(x)| <= sqrt((2l+1)/2) on [-1, 1]
    assert abs(eval_legendre_normalized(ell, x)) <= math.sqrt((2 * ell + 1) / 2) * (1 + 1e-12)
