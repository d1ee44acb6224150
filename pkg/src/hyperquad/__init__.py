"""Hyperinterpolation with relaxed quadrature exactness on [-1, 1] and the sphere.

Typical use::

    from hyperquad import clenshaw_curtis, hyperinterpolate, certify
    rule = clenshaw_curtis(50)
    h = hyperinterpolate(rule, 40, lambda x: np.exp(-x**2))
"""

from .analysis import (
    ErrorCertificate,
    best_uniform_upper,
    certify,
    error_bound,
    l2_error,
    reference_rule,
    stability_bound,
    sup_error,
    sup_norm,
)
from .bases import (
    INTERVAL,
    SPHERE,
    Domain,
    DomainKind,
    basis_matrix,
    dim_poly_space,
    domain_from_name,
    eval_basis_vector,
    eval_legendre_normalized,
    eval_sph_harmonic,
    sphere_degree_order,
    sphere_flat_index,
)
from .errors import (
    CapExceededError,
    DomainError,
    ExactnessError,
    HyperquadError,
    MZError,
    QuadratureError,
)
from .hyper import (
    Hyperinterpolant,
    discrete_inner_product,
    evaluate,
    hyperinterpolate,
    l2_norm,
    sigma,
    tail,
    truncate,
)
from .product import ProductWeights, product_integral, product_weights
from .quadrature import (
    MinPointsBound,
    MZReport,
    QuadratureRule,
    clenshaw_curtis,
    equispaced_points,
    gauss_legendre,
    gram_matrix,
    l1_minimal_weights,
    load_spherical_design,
    min_points_bound,
    mz_eta,
    tensor_sphere_rule,
    verified_exactness,
    verify_exactness,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
