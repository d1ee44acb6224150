"""Orthonormal polynomial bases on [-1, 1] and on the unit sphere.

Interval basis: Legendre polynomials scaled by sqrt((2l+1)/2), so that
their L2 norm with unit weight is one.  Flat index l (1-based) is degree l-1.

Sphere basis: real orthonormal spherical harmonics.  Degree l, order
k in 1..2l+1 maps to the signed order m = k - l - 1 in -l..l, with

    m < 0 :  sqrt(2) * Pbar_l^|m|(cos theta) * sin(|m| phi)
    m = 0 :            Pbar_l^0(cos theta)
    m > 0 :  sqrt(2) * Pbar_l^m(cos theta) * cos(m phi)

where Pbar are the fully normalised associated Legendre functions (no
Condon-Shortley phase).  Flat index is l**2 + k, lexicographic in (l, k).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

INTERVAL_TOL = 1e-12
SPHERE_TOL = 1e-12


class DomainKind(enum.Enum):
    INTERVAL = "interval"
    SPHERE = "sphere"


@dataclass(frozen=True)
class Domain:
    kind: DomainKind
    total_measure: float

    def __post_init__(self):
        if not (self.total_measure > 0 and math.isfinite(self.total_measure)):
            raise ValueError("total_measure must be positive and finite")

    @property
    def name(self) -> str:
        return self.kind.value

    def __str__(self) -> str:
        return self.name


INTERVAL = Domain(DomainKind.INTERVAL, 2.0)
SPHERE = Domain(DomainKind.SPHERE, 4.0 * math.pi)


def domain_from_name(name: str) -> Domain:
    try:
        kind = DomainKind(name)
    except ValueError:
        raise ValueError(f"unknown domain {name!r}") from None
    return INTERVAL if kind is DomainKind.INTERVAL else SPHERE


def dim_poly_space(domain: Domain, n: int) -> int:
    """Dimension of the space of polynomials of degree <= n on `domain`."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    if domain.kind is DomainKind.INTERVAL:
        return n + 1
    return (n + 1) ** 2


# -- flat indexing -----------------------------------------------------------

def sphere_flat_index(degree: int, order: int) -> int:
    """1-based flat index of Y_{degree, order}, order in 1..2*degree+1."""
    if degree < 0 or not 1 <= order <= 2 * degree + 1:
        raise ValueError(f"invalid (degree, order) = ({degree}, {order})")
    return degree * degree + order


def sphere_degree_order(flat_index: int) -> tuple[int, int]:
    """Inverse of `sphere_flat_index`."""
    if flat_index < 1:
        raise ValueError(f"flat index must be >= 1, got {flat_index}")
    degree = math.isqrt(flat_index - 1)
    return degree, flat_index - degree * degree


def basis_degrees(domain: Domain, n: int) -> np.ndarray:
    """Polynomial degree of each basis function, in flat-index order."""
    if domain.kind is DomainKind.INTERVAL:
        return np.arange(n + 1)
    return np.repeat(np.arange(n + 1), 2 * np.arange(n + 1) + 1)


# -- point validation --------------------------------------------------------

def as_interval_points(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim > 1:
        raise DomainError(f"interval points must be scalars or 1-D, got shape {x.shape}")
    if np.any(np.abs(x) > 1.0 + INTERVAL_TOL) or not np.all(np.isfinite(x)):
        raise DomainError("interval points must satisfy |x| <= 1")
    return np.clip(x, -1.0, 1.0)


def as_sphere_points(points) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    if p.ndim not in (1, 2) or p.shape[-1] != 3:
        raise DomainError(f"sphere points must have shape (3,) or (m, 3), got {p.shape}")
    norms = np.linalg.norm(p, axis=-1)
    if np.any(np.abs(norms - 1.0) > SPHERE_TOL) or not np.all(np.isfinite(p)):
        raise DomainError("sphere points must have unit Euclidean norm")
    return p


def as_points(domain: Domain, points) -> np.ndarray:
    if domain.kind is DomainKind.INTERVAL:
        return as_interval_points(points)
    return as_sphere_points(points)


# -- interval ----------------------------------------------------------------

def _legendre_table(n: int, x: np.ndarray) -> np.ndarray:
    """Normalised Legendre values, shape (len(x), n+1)."""
    out = np.empty((x.size, n + 1))
    p_prev = np.ones_like(x)
    out[:, 0] = p_prev
    if n >= 1:
        p_cur = x.copy()
        out[:, 1] = p_cur
        for ell in range(1, n):
            p_next = ((2 * ell + 1) * x * p_cur - ell * p_prev) / (ell + 1)
            out[:, ell + 1] = p_next
            p_prev, p_cur = p_cur, p_next
    out *= np.sqrt((2.0 * np.arange(n + 1) + 1.0) / 2.0)
    return out


def eval_legendre_normalized(degree: int, x):
    """Legendre polynomial of the given degree, normalised to unit L2 norm on [-1, 1].

    Accepts a scalar or an array of points and returns the same shape.
    """
    if degree < 0:
        raise ValueError(f"degree must be nonnegative, got {degree}")
    xs = as_interval_points(x)
    vals = _legendre_table(degree, np.atleast_1d(xs))[:, degree]
    return float(vals[0]) if xs.ndim == 0 else vals


# -- sphere ------------------------------------------------------------------

def _sphere_table(n: int, p: np.ndarray) -> np.ndarray:
    """Real orthonormal harmonics up to degree n, shape (len(p), (n+1)**2)."""
    z = p[:, 2]
    s = np.hypot(p[:, 0], p[:, 1])
    phi = np.arctan2(p[:, 1], p[:, 0])
    m_range = np.arange(1, n + 1)
    cos_m = np.cos(np.outer(phi, m_range))
    sin_m = np.sin(np.outer(phi, m_range))

    out = np.empty((p.shape[0], (n + 1) ** 2))
    root2 = math.sqrt(2.0)
    # Sectoral seed Pbar_m^m, advanced along m.
    p_mm = np.full(z.shape, 1.0 / math.sqrt(4.0 * math.pi))
    for m in range(n + 1):
        if m > 0:
            p_mm = math.sqrt((2 * m + 1) / (2.0 * m)) * s * p_mm
        # Upward recurrence in degree at fixed order m.
        p_lm2 = None
        p_lm1 = p_mm
        for ell in range(m, n + 1):
            if ell == m:
                cur = p_mm
            elif ell == m + 1:
                cur = math.sqrt(2 * m + 3) * z * p_mm
            else:
                a = math.sqrt((4.0 * ell * ell - 1.0) / (ell * ell - m * m))
                b = math.sqrt(((ell - 1.0) ** 2 - m * m) / (4.0 * (ell - 1.0) ** 2 - 1.0))
                cur = a * (z * p_lm1 - b * p_lm2)
            if ell > m:
                p_lm2, p_lm1 = p_lm1, cur
            centre = ell * ell + ell  # 0-based column of m = 0
            if m == 0:
                out[:, centre] = cur
            else:
                out[:, centre + m] = root2 * cur * cos_m[:, m - 1]
                out[:, centre - m] = root2 * cur * sin_m[:, m - 1]
    return out


def eval_sph_harmonic(degree: int, order: int, point):
    """Real orthonormal spherical harmonic Y_{degree, order} at unit vector(s).

    `order` runs over 1..2*degree+1.  `point` is a unit 3-vector or an
    (m, 3) array of them.
    """
    col = sphere_flat_index(degree, order) - 1
    p = as_sphere_points(point)
    vals = _sphere_table(degree, np.atleast_2d(p))[:, col]
    return float(vals[0]) if p.ndim == 1 else vals


# -- vectorised --------------------------------------------------------------

def basis_matrix(domain: Domain, n: int, points) -> np.ndarray:
    """Matrix B with B[j, l] = p_{l+1}(x_j), shape (m, d_n)."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    pts = as_points(domain, points)
    if domain.kind is DomainKind.INTERVAL:
        return _legendre_table(n, np.atleast_1d(pts))
    return _sphere_table(n, np.atleast_2d(pts))


def eval_basis_vector(domain: Domain, n: int, point) -> np.ndarray:
    """All d_n basis values at a single point, in flat-index order."""
    pts = as_points(domain, point)
    if pts.ndim != (0 if domain.kind is DomainKind.INTERVAL else 1):
        raise DomainError("eval_basis_vector takes a single point")
    return basis_matrix(domain, n, pts)[0]


def constant_moments(domain: Domain, n: int) -> np.ndarray:
    """Integrals of the basis functions: sqrt(V) for the constant, zero otherwise."""
    moments = np.zeros(dim_poly_space(domain, n))
    moments[0] = math.sqrt(domain.total_measure)
    return moments
