import numpy as np
import pytest

from hyperquad import dim_poly_space


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unit_vectors(rng, count):
    v = rng.standard_normal((count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_poly_coeffs(rng, domain, k, n):
    """Coefficients of a random element of P_k, embedded in the degree-n basis."""
    c = np.zeros(dim_poly_space(domain, n))
    c[: dim_poly_space(domain, k)] = rng.standard_normal(dim_poly_space(domain, k))
    return c
