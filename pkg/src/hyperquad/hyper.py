"""The hyperinterpolation operator and its discrete inner-product toolkit.

    L_n f = sum_{l=1}^{d_n} <f, p_l>_m p_l,    <u, v>_m = sum_j w_j u(x_j) v(x_j)

The rule only needs exactness n + k with 0 < k <= n; construction refuses
rules verified below n + 1 unless forced.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .bases import Domain, DomainKind, as_points, basis_matrix, dim_poly_space
from .errors import CapExceededError, ExactnessError
from .quadrature import DEFAULT_CAP, QuadratureRule, verified_exactness


def sample(f, domain: Domain, points, samples=None) -> np.ndarray:
    """Values of f at points.  Precomputed `samples` take precedence.

    f should be vectorised (an (m,) or (m, 3) array in, (m,) out); scalar-only
    callables are handled by a per-point fallback.
    """
    pts = as_points(domain, points)
    m = len(pts)
    if samples is not None:
        values = np.asarray(samples, dtype=float).reshape(-1)
    else:
        if f is None:
            raise ValueError("need a function or precomputed samples")
        values = np.asarray(f(pts), dtype=float)
        if values.shape != (m,):
            values = np.array([float(f(p)) for p in pts])
    if values.shape != (m,):
        raise ValueError(f"expected {m} samples, got shape {values.shape}")
    return values


def discrete_inner_product(rule: QuadratureRule, u, v) -> float:
    """<u, v>_m from nodal samples, summed left to right."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (rule.m,) or v.shape != (rule.m,):
        raise ValueError(f"sample vectors must have length m={rule.m}, got {u.shape} and {v.shape}")
    return float(np.cumsum(rule.weights * u * v)[-1])


@dataclass(frozen=True, eq=False)
class Hyperinterpolant:
    """Degree-n hyperinterpolant: coefficients in the orthonormal basis plus provenance."""

    domain: Domain
    n: int
    coeffs: np.ndarray
    rule_exactness: int = -1
    rule_id: str = ""
    samples: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).reshape(-1)
        if coeffs.size != dim_poly_space(self.domain, self.n):
            raise ValueError(
                f"degree {self.n} on {self.domain} needs {dim_poly_space(self.domain, self.n)} "
                f"coefficients, got {coeffs.size}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, points):
        return evaluate(self, points)

    def l2_norm(self) -> float:
        return l2_norm(self)


def _check_exactness(rule, n, needed, force, what):
    top = max(2 * n, needed)
    exact = verified_exactness(rule, max_degree=top)
    if exact < needed:
        msg = (
            f"{what}: rule {rule.label!r} is exact only to degree {exact} "
            f"but degree {needed} is required (n={n})"
        )
        if not force:
            raise ExactnessError(msg)
        warnings.warn("forced past exactness check: " + msg, stacklevel=3)
    return exact


def hyperinterpolate(
    rule: QuadratureRule,
    n: int,
    f=None,
    *,
    samples=None,
    force: bool = False,
    cap: int = DEFAULT_CAP,
    exactness: int | None = None,
) -> Hyperinterpolant:
    """Build L_n f from the rule's nodes.

    `exactness` skips re-verification when the caller already measured it.
    Raises ExactnessError if the rule is not exact on P_{n+1} (pass
    force=True to proceed anyway, with a warning).
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    d = dim_poly_space(rule.domain, n)
    if d > cap:
        raise CapExceededError(f"d_n = {d} exceeds cap {cap}")
    if exactness is None:
        exactness = _check_exactness(rule, n, n + 1, force, "hyperinterpolate")
    elif exactness < n + 1 and not force:
        raise ExactnessError(f"hyperinterpolate: exactness {exactness} < n + 1 = {n + 1}")
    values = sample(f, rule.domain, rule.nodes, samples)
    B = basis_matrix(rule.domain, n, rule.nodes)
    coeffs = B.T @ (rule.weights * values)
    values = values.copy()
    values.setflags(write=False)
    return Hyperinterpolant(rule.domain, n, coeffs, exactness, rule.label, values)


def evaluate(h: Hyperinterpolant, points):
    """sum_l c_l p_l(x) at one point or an array of points."""
    pts = as_points(h.domain, points)
    single = pts.ndim == (0 if h.domain.kind is DomainKind.INTERVAL else 1)
    vals = basis_matrix(h.domain, h.n, pts) @ h.coeffs
    return float(vals[0]) if single else vals


def l2_norm(h: Hyperinterpolant) -> float:
    """Continuous L2 norm, by Parseval: the Euclidean norm of the coefficients."""
    return float(np.linalg.norm(h.coeffs))


def truncate(h: Hyperinterpolant, k: int) -> Hyperinterpolant:
    """L_k f from L_n f (same discrete coefficients, first d_k of them)."""
    if not 0 <= k <= h.n:
        raise ValueError(f"need 0 <= k <= n = {h.n}, got {k}")
    if k == h.n:
        return h
    return replace(h, n=k, coeffs=h.coeffs[: dim_poly_space(h.domain, k)])


def tail(h: Hyperinterpolant, k: int) -> Hyperinterpolant:
    """(L_n - L_k) f as a degree-n polynomial whose first d_k coefficients are zero."""
    if not 0 <= k <= h.n:
        raise ValueError(f"need 0 <= k <= n = {h.n}, got {k}")
    coeffs = h.coeffs.copy()
    coeffs[: dim_poly_space(h.domain, k)] = 0.0
    return replace(h, coeffs=coeffs)


def sigma(
    rule: QuadratureRule,
    n: int,
    k: int,
    f=None,
    *,
    samples=None,
    force: bool = False,
) -> float:
    """Quadrature error on the square of g = L_n f - L_k f.

    sigma = <g, g> - <g, g>_m, with <g, g> taken exactly by Parseval.
    Requires exactness n + k.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    exact = _check_exactness(rule, n, n + k, force, "sigma")
    h = hyperinterpolate(rule, n, f, samples=samples, force=force, exactness=exact)
    g = tail(h, k)
    if not np.any(g.coeffs):
        return 0.0
    continuous = float(g.coeffs @ g.coeffs)
    nodal = evaluate(g, rule.nodes)
    return continuous - discrete_inner_product(rule, nodal, nodal)
