"""Product integration: int h f dw approximated by int h (L_n f) dw = sum_j W_j f(x_j)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bases import basis_matrix, dim_poly_space
from .hyper import hyperinterpolate, sample
from .quadrature import QuadratureRule, verified_exactness
from .errors import ExactnessError


@dataclass(frozen=True, eq=False)
class ProductWeights:
    weights: np.ndarray
    h_moments: np.ndarray
    rule: QuadratureRule
    n: int

    @property
    def rule_id(self) -> str:
        return self.rule.label


def product_weights(
    rule: QuadratureRule, n: int, h_moments, *, force: bool = False
) -> ProductWeights:
    """Modified weights W_j = w_j * sum_l p_l(x_j) * int h p_l dw.

    `h_moments` holds int h p_l dw for l = 1..d_n in flat-index order.
    """
    moments = np.asarray(h_moments, dtype=float).reshape(-1)
    d = dim_poly_space(rule.domain, n)
    if moments.size != d:
        raise ValueError(f"need {d} moments for degree {n}, got {moments.size}")
    if not force and verified_exactness(rule, max_degree=n + 1) < n + 1:
        raise ExactnessError(f"rule {rule.label!r} is not exact on P_{n + 1}")
    B = basis_matrix(rule.domain, n, rule.nodes)
    W = rule.weights * (B @ moments)
    W.setflags(write=False)
    moments = moments.copy()
    moments.setflags(write=False)
    return ProductWeights(W, moments, rule, n)


def product_integral(pw: ProductWeights, f=None, *, samples=None) -> float:
    """sum_j W_j f(x_j)."""
    values = sample(f, pw.rule.domain, pw.rule.nodes, samples)
    return float(np.cumsum(pw.weights * values)[-1])


def product_integral_by_coefficients(pw: ProductWeights, f=None, *, samples=None) -> float:
    """The coefficient-side reading: sum_l <f, p_l>_m * int h p_l dw."""
    h = hyperinterpolate(pw.rule, pw.n, f, samples=samples, force=True,
                         exactness=pw.n + 1)
    return float(h.coeffs @ pw.h_moments)


def moments_by_quadrature(h, n: int, reference: QuadratureRule) -> np.ndarray:
    """int h p_l dw for a smooth weight h, via a high-exactness reference rule.

    Use a reference exact to degree >= 2n + 20; singular h needs analytic moments.
    """
    values = sample(h, reference.domain, reference.nodes)
    B = basis_matrix(reference.domain, n, reference.nodes)
    return B.T @ (reference.weights * values)
