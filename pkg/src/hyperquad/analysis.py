"""Error measurement and bound certification for hyperinterpolants.

E_k(f), the best uniform error from P_k, is never computed exactly.  It is
replaced by E_k_hat(f) = ||f - chi||_inf for a concrete chi in P_k, which is
an upper bound; the certified right-hand side is increasing in E_k, so
certificates built on E_k_hat remain sound.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from numpy.polynomial import chebyshev

from .bases import INTERVAL, Domain, DomainKind
from .errors import ExactnessError, MZError
from .hyper import Hyperinterpolant, evaluate, hyperinterpolate, sample
from .quadrature import QuadratureRule, gauss_legendre, mz_eta, tensor_sphere_rule, verified_exactness

INTERVAL_GRID_SIZE = 4096
SPHERE_GRID_SHAPE = (120, 240)


def chebyshev_grid(size: int = INTERVAL_GRID_SIZE) -> np.ndarray:
    """Chebyshev extreme points cos(j pi / (size-1)), ascending."""
    x = np.cos(np.arange(size) * np.pi / (size - 1))[::-1]
    x[np.abs(x) < 1e-15] = 0.0
    return x


def latlong_grid(n_lat: int = SPHERE_GRID_SHAPE[0], n_lon: int = SPHERE_GRID_SHAPE[1]) -> np.ndarray:
    """Unit vectors on an n_lat x n_lon colatitude/longitude grid, poles included.

    Row-major in (colatitude, longitude); shape (n_lat * n_lon, 3).
    """
    theta = np.linspace(0.0, np.pi, n_lat)
    phi = 2.0 * np.pi * np.arange(n_lon) / n_lon
    T, P = np.meshgrid(theta, phi, indexing="ij")
    pts = np.column_stack([
        (np.sin(T) * np.cos(P)).ravel(),
        (np.sin(T) * np.sin(P)).ravel(),
        np.cos(T).ravel(),
    ])
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def default_grid(domain: Domain) -> np.ndarray:
    if domain.kind is DomainKind.INTERVAL:
        return chebyshev_grid()
    return latlong_grid()


def reference_rule(domain: Domain, n: int) -> QuadratureRule:
    """High-order rule for residual integrals.

    The sphere gets more headroom: functions of the distance to a point are
    only finitely smooth in z, so the z-Gauss rule converges algebraically.
    """
    if domain.kind is DomainKind.INTERVAL:
        return gauss_legendre(2 * n + 11)
    return tensor_sphere_rule(6 * n + 20)


def l2_error(h: Hyperinterpolant, f, reference: QuadratureRule | None = None) -> float:
    """||L_n f - f||_2 integrated by the reference rule."""
    reference = reference or reference_rule(h.domain, h.n)
    if reference.domain != h.domain:
        raise ValueError(f"reference rule is on {reference.domain}, hyperinterpolant on {h.domain}")
    resid = evaluate(h, reference.nodes) - sample(f, reference.domain, reference.nodes)
    return math.sqrt(float(reference.weights @ resid**2))


def sup_error(h: Hyperinterpolant, f, grid=None) -> float:
    grid = default_grid(h.domain) if grid is None else grid
    return float(np.abs(evaluate(h, grid) - sample(f, h.domain, grid)).max())


def sup_norm(f, domain: Domain, grid=None) -> float:
    """||f||_inf estimated on a fixed dense grid."""
    grid = default_grid(domain) if grid is None else grid
    return float(np.abs(sample(f, domain, grid)).max())


def best_uniform_upper(f, k: int, domain: Domain, grid=None) -> float:
    """Upper bound E_k_hat(f) >= E_k(f) from a feasible degree-k approximant.

    Interval: smallest grid residual among Chebyshev interpolants of degree
    0..k (each lies in P_k).  Sphere: residual of the degree-k hyperinterpolant
    built on a product rule exact to degree 2k.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    grid = default_grid(domain) if grid is None else grid
    fg = sample(f, domain, grid)
    if domain.kind is DomainKind.INTERVAL:
        best = math.inf
        for j in range(k + 1):
            coef = chebyshev.chebinterpolate(lambda x: sample(f, INTERVAL, x), j)
            best = min(best, float(np.abs(chebyshev.chebval(grid, coef) - fg).max()))
        return best
    rule = tensor_sphere_rule(2 * k)
    h = hyperinterpolate(rule, k, f, exactness=2 * k) if k > 0 else hyperinterpolate(
        rule, 0, f, force=True, exactness=0)
    return float(np.abs(evaluate(h, grid) - fg).max())


def error_bound(eta: float, V: float, e_k: float, h_norm: float = 1.0) -> float:
    """(1/sqrt(1-eta) + 1) * ||h||_2 * sqrt(V) * E_k; h_norm = 1 gives the plain bound."""
    if not eta < 1:
        raise MZError(f"eta = {eta:.6g} >= 1: no bound")
    return (1.0 / math.sqrt(1.0 - eta) + 1.0) * h_norm * math.sqrt(V) * e_k


def stability_bound(eta: float, V: float, f_sup: float) -> float:
    """sqrt(V) / sqrt(1 - eta) * ||f||_inf."""
    if not eta < 1:
        raise MZError(f"eta = {eta:.6g} >= 1: no bound")
    return math.sqrt(V) / math.sqrt(1.0 - eta) * f_sup


@dataclass(frozen=True)
class ErrorCertificate:
    n: int
    k: int
    eta: float
    l2_error: float
    sup_error: float
    e_k_upper: float
    bound_rhs: float
    satisfied: bool
    l2_norm: float
    f_sup: float
    stability_rhs: float
    stability_satisfied: bool
    rule_label: str = ""
    m: int = 0
    exactness: int = -1

    def to_dict(self) -> dict:
        return asdict(self)


def certify(
    rule: QuadratureRule,
    n: int,
    k: int,
    f,
    reference: QuadratureRule | None = None,
    grid=None,
) -> ErrorCertificate:
    """Measure eta and the L2 error, and check the stability and error bounds.

    Raises ExactnessError unless the rule is verified exact to n + k, and
    MZError when eta >= 1 (no bound is available).
    """
    if not 0 < k <= n:
        raise ValueError(f"need 0 < k <= n, got n={n}, k={k}")
    exact = verified_exactness(rule, max_degree=max(2 * n, rule.claimed_exactness))
    if exact < n + k:
        raise ExactnessError(f"rule {rule.label!r} verified exact to {exact} < n + k = {n + k}")
    report = mz_eta(rule, n)
    if report.eta >= 1:
        raise MZError(f"MZ property fails at this degree: eta = {report.eta:.6g} for {rule.label!r}, n={n}")
    grid = default_grid(rule.domain) if grid is None else grid
    h = hyperinterpolate(rule, n, f, exactness=exact)
    V = rule.domain.total_measure
    l2 = l2_error(h, f, reference)
    e_k = best_uniform_upper(f, k, rule.domain, grid)
    rhs = error_bound(report.eta, V, e_k)
    f_sup = sup_norm(f, rule.domain, grid)
    stab_rhs = stability_bound(report.eta, V, f_sup)
    norm = h.l2_norm()
    return ErrorCertificate(
        n=n,
        k=k,
        eta=report.eta,
        l2_error=l2,
        sup_error=sup_error(h, f, grid),
        e_k_upper=e_k,
        bound_rhs=rhs,
        satisfied=bool(l2 <= rhs),
        l2_norm=norm,
        f_sup=f_sup,
        stability_rhs=stab_rhs,
        stability_satisfied=bool(norm <= stab_rhs * (1 + 1e-8)),
        rule_label=rule.label,
        m=rule.m,
        exactness=exact,
    )
