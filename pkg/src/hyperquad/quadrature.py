"""Positive-weight quadrature rules, exactness audits and the MZ constant.

Rules are immutable: node and weight arrays are flagged read-only at
construction, and every constructor either returns strictly positive
weights or raises `QuadratureError`.
"""

from __future__ import annotations

import io
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from .bases import (
    INTERVAL,
    SPHERE,
    Domain,
    DomainKind,
    as_points,
    basis_degrees,
    basis_matrix,
    constant_moments,
    dim_poly_space,
)
from .errors import CapExceededError, QuadratureError
from .simplex import Infeasible, LPError, simplex

EXACTNESS_TOL = 1e-10
WEIGHT_SUM_TOL = 1e-10
DESIGN_NORM_TOL = 1e-8
DEFAULT_CAP = 2500
EIGH_THRESHOLD = 600


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """m nodes with positive weights on a domain, plus the claimed exactness degree."""

    domain: Domain
    nodes: np.ndarray
    weights: np.ndarray
    claimed_exactness: int
    label: str = "rule"
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        nodes = np.array(as_points(self.domain, self.nodes), dtype=float)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if nodes.ndim == 0 or (self.domain.kind is DomainKind.SPHERE and nodes.ndim == 1):
            nodes = nodes.reshape(1, -1) if self.domain.kind is DomainKind.SPHERE else nodes.reshape(1)
        if len(nodes) == 0 or len(nodes) != len(weights):
            raise QuadratureError(
                f"{self.label}: need m >= 1 nodes and as many weights "
                f"(got {len(nodes)} nodes, {len(weights)} weights)"
            )
        if not np.all(weights > 0):
            raise QuadratureError(
                f"{self.label}: positivity violated (min weight {weights.min():.3e})"
            )
        total = self.domain.total_measure
        if abs(weights.sum() - total) > WEIGHT_SUM_TOL * total:
            raise QuadratureError(
                f"{self.label}: weights sum to {weights.sum():.17g}, expected {total:.17g}"
            )
        if self.claimed_exactness < 0:
            raise QuadratureError("claimed exactness must be nonnegative")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def m(self) -> int:
        return len(self.weights)

    def integrate(self, values) -> float:
        """sum_j w_j g(x_j) for nodal values g(x_j)."""
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))

    def __repr__(self) -> str:
        return (
            f"QuadratureRule({self.label!r}, domain={self.domain.name}, m={self.m}, "
            f"claimed_exactness={self.claimed_exactness})"
        )


# -- interval constructors ---------------------------------------------------

def _legendre_and_derivative(m: int, x: np.ndarray):
    p_prev, p = np.ones_like(x), x.copy()
    for ell in range(1, m):
        p_prev, p = p, ((2 * ell + 1) * x * p - ell * p_prev) / (ell + 1)
    dp = m * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def gauss_legendre(m: int, refine: bool = True) -> QuadratureRule:
    """m-point Gauss-Legendre rule (exact on P_{2m-1}).

    Nodes and weights start from Golub-Welsch: eigenvalues of the symmetric
    Jacobi matrix and squared first eigenvector components times V = 2.
    With `refine`, two Newton steps on P_m polish the nodes and the weights
    are recomputed as 2 / ((1 - x^2) P_m'(x)^2); eigenvector weights carry
    errors of several ulps that show up as a ~1e-14 floor in L2 errors.
    """
    if m < 1:
        raise QuadratureError(f"Gauss rule needs m >= 1, got {m}")
    k = np.arange(1, m)
    off = k / np.sqrt(4.0 * k * k - 1.0)
    jacobi = np.diag(off, 1) + np.diag(off, -1)
    try:
        nodes, vecs = np.linalg.eigh(jacobi)
    except np.linalg.LinAlgError as exc:
        raise QuadratureError(f"Jacobi eigen-solve failed for m={m}: {exc}") from exc
    weights = INTERVAL.total_measure * vecs[0] ** 2
    if refine:
        for _ in range(2):
            p, dp = _legendre_and_derivative(m, nodes)
            nodes = nodes - p / dp
        _, dp = _legendre_and_derivative(m, nodes)
        weights = 2.0 / ((1.0 - nodes * nodes) * dp * dp)
    # Symmetrise: the exact rule is invariant under x -> -x.
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return QuadratureRule(INTERVAL, nodes, weights, 2 * m - 1, label=f"gauss-{m}")


def clenshaw_curtis(m: int) -> QuadratureRule:
    """m-point Clenshaw-Curtis rule on Chebyshev extreme points (exact on P_{m-1}).

    Weights come from the explicit cosine sum, O(m**2).
    """
    if m < 2:
        raise QuadratureError(f"Clenshaw-Curtis needs m >= 2, got {m}")
    N = m - 1
    theta = np.arange(m) * np.pi / N
    k = np.arange(1, N // 2 + 1)
    b = np.full(k.shape, 2.0)
    if N % 2 == 0:
        b[-1] = 1.0
    series = (b / (4.0 * k * k - 1.0)) @ np.cos(2.0 * np.outer(k, theta))
    c = np.full(m, 2.0)
    c[0] = c[-1] = 1.0
    weights = c / N * (1.0 - series)
    nodes = np.cos(theta)
    nodes[np.abs(nodes) < 1e-15] = 0.0
    return QuadratureRule(
        INTERVAL, nodes[::-1].copy(), weights[::-1].copy(), m - 1, label=f"clenshaw_curtis-{m}"
    )


def equispaced_points(m: int) -> np.ndarray:
    return np.linspace(-1.0, 1.0, m)


def l1_minimal_weights(
    points, degree: int, domain: Domain = INTERVAL, label: str | None = None
) -> QuadratureRule:
    """Weights of least l1 norm that integrate P_degree exactly on the given points.

    Solves min sum|w_j| s.t. sum_j w_j p_l(x_j) = int p_l for all l <= d_degree,
    with the split w = u - v, u, v >= 0.  When that optimum is attained by a
    nonnegative vector (optimal value == V), every nonnegative feasible w is
    l1-minimal; among those, the one maximising min_j w_j is returned so that
    no node is silently dropped with a zero weight.

    Fewer points than dim P_degree is allowed: the moment system can still be
    consistent (two Gauss points are exact on P_3), and the LP decides.
    """
    pts = as_points(domain, points)
    m = len(pts)
    label = label or f"l1-{m}-deg{degree}"
    flat = pts.reshape(m, -1)
    if len(np.unique(np.round(flat, 14), axis=0)) != m:
        raise QuadratureError(f"{label}: points must be distinct")

    A = basis_matrix(domain, degree, pts).T
    b = constant_moments(domain, degree)
    V = domain.total_measure
    try:
        lp = simplex(np.ones(2 * m), np.hstack([A, -A]), b)
    except Infeasible as exc:
        raise QuadratureError(f"{label}: exactness unattainable on these points") from exc
    except LPError as exc:
        raise QuadratureError(f"{label}: LP failed ({exc})") from exc
    weights = lp.x[:m] - lp.x[m:]
    if lp.fun > V * (1.0 + 1e-9):
        raise QuadratureError(
            f"{label}: positivity violated (l1-minimal weights have l1 norm "
            f"{lp.fun:.6g} > V = {V:.6g}, min weight {weights.min():.3e})"
        )

    # Maximise t subject to A (w' + t 1) = b, w' >= 0, t >= 0.
    c = np.zeros(m + 1)
    c[-1] = -1.0
    try:
        lp2 = simplex(c, np.hstack([A, A.sum(axis=1, keepdims=True)]), b)
    except LPError as exc:
        raise QuadratureError(f"{label}: max-min weight LP failed ({exc})") from exc
    weights = lp2.x[:m] + lp2.x[-1]
    if weights.min() <= 0:
        raise QuadratureError(f"{label}: positivity violated (min weight {weights.min():.3e})")
    return QuadratureRule(domain, pts, weights, degree, label=label)


def dense_exactness_weights(points, degree: int, domain: Domain = INTERVAL) -> np.ndarray:
    """Interpolatory weights from the square moment system (no sign constraint)."""
    pts = as_points(domain, points)
    A = basis_matrix(domain, degree, pts).T
    if A.shape[0] != A.shape[1]:
        raise ValueError("square system needs len(points) == d_degree")
    return np.linalg.solve(A, constant_moments(domain, degree))


# -- sphere constructors -----------------------------------------------------

def tensor_sphere_rule(t: int, z_rule: str = "gauss", n_lon: int | None = None) -> QuadratureRule:
    """Product rule: an interval rule in z = cos(theta) times a trapezoid rule in longitude.

    The default (Gauss with ceil((t+1)/2) points, t+1 longitudes) is the
    smallest product rule exact on P_t.  `z_rule="clenshaw_curtis"` uses t+1
    Chebyshev points in z instead; combined with `n_lon >= 2n+1` this gives a
    rule whose exactness is governed by t while degree-n harmonics stay
    discretely near-orthonormal (needed for eta < 1).
    """
    if t < 0:
        raise QuadratureError(f"tensor rule degree must be nonnegative, got {t}")
    n_lon = t + 1 if n_lon is None else n_lon
    if n_lon < 1:
        raise QuadratureError("need at least one longitude")
    if z_rule == "gauss":
        zr = gauss_legendre((t + 2) // 2)
        tag = "tensor"
    elif z_rule == "clenshaw_curtis":
        zr = clenshaw_curtis(max(t + 1, 2))
        tag = "tensor_cc"
    else:
        raise QuadratureError(f"unknown z rule {z_rule!r}")
    exactness = min(zr.claimed_exactness, n_lon - 1)

    phi = 2.0 * np.pi * np.arange(n_lon) / n_lon
    z = np.repeat(zr.nodes, n_lon)
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    ph = np.tile(phi, zr.m)
    nodes = np.column_stack([s * np.cos(ph), s * np.sin(ph), z])
    nodes /= np.linalg.norm(nodes, axis=1, keepdims=True)
    weights = np.repeat(zr.weights, n_lon) * (2.0 * np.pi / n_lon)
    label = f"{tag}-{t}" if n_lon == t + 1 else f"{tag}-{t}x{n_lon}"
    return QuadratureRule(SPHERE, nodes, weights, exactness, label=label)


def _read_text(source) -> str:
    if isinstance(source, (bytes, bytearray)):
        return bytes(source).decode("utf-8")
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return fh.read().decode("utf-8")
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def parse_design_points(source) -> np.ndarray:
    """Parse whitespace-separated "x y z" rows; '#' starts a comment."""
    rows = []
    for lineno, line in enumerate(io.StringIO(_read_text(source)), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.replace(",", " ").split()
        if len(parts) != 3:
            raise QuadratureError(f"line {lineno}: expected 3 coordinates, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise QuadratureError(f"line {lineno}: {exc}") from exc
    if not rows:
        raise QuadratureError("design file contains no points")
    return np.array(rows)


def load_spherical_design(source, t: int, label: str | None = None) -> QuadratureRule:
    """Equal-weight rule 4*pi/m on a spherical t-design read from `source`.

    `source` may be bytes, a path, or an open file.  Rows are renormalised
    to unit length if within 1e-8 of it.  Fewer than (t+1)**2 points is
    recorded in `rule.notes` and warned about; follow with `verify_exactness`.
    """
    pts = parse_design_points(source)
    norms = np.linalg.norm(pts, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > DESIGN_NORM_TOL)
    if bad.size:
        raise QuadratureError(
            f"row {bad[0] + 1} has norm {norms[bad[0]]:.12g}, not unit within {DESIGN_NORM_TOL}"
        )
    pts = pts / norms[:, None]
    m = len(pts)
    notes = []
    if m < (t + 1) ** 2:
        msg = f"design has m={m} < (t+1)^2={(t + 1) ** 2} points for t={t}"
        notes.append(msg)
        warnings.warn(msg, stacklevel=2)
    weights = np.full(m, SPHERE.total_measure / m)
    return QuadratureRule(SPHERE, pts, weights, t, label=label or f"design-{t}", notes=tuple(notes))


# -- audits -------------------------------------------------------------------

def exactness_residuals(rule: QuadratureRule, degree: int) -> np.ndarray:
    """Per-degree max |sum_j w_j p_l(x_j) - int p_l| for degrees 0..degree."""
    B = basis_matrix(rule.domain, degree, rule.nodes)
    resid = np.abs(rule.weights @ B - constant_moments(rule.domain, degree))
    per_degree = np.zeros(degree + 1)
    np.maximum.at(per_degree, basis_degrees(rule.domain, degree), resid)
    return per_degree


def verify_exactness(rule: QuadratureRule, degree: int) -> float:
    """Largest moment residual over the basis of P_degree."""
    return float(exactness_residuals(rule, degree).max())


def verified_exactness(rule: QuadratureRule, max_degree: int | None = None,
                       tol: float = EXACTNESS_TOL) -> int:
    """Largest t <= max_degree with every moment residual up to degree t below tol.

    Returns -1 if even the constant is not integrated to tol.
    """
    max_degree = rule.claimed_exactness if max_degree is None else max_degree
    ok = exactness_residuals(rule, max_degree) <= tol
    return int(np.argmin(ok)) - 1 if not ok.all() else max_degree


@dataclass(frozen=True)
class MZReport:
    n: int
    eta: float
    gram_residual_spectral_norm: float
    max_exactness_residual: float
    exactness_degree_verified: int
    exactness_residuals: tuple[float, ...] = ()
    rule_label: str = ""
    method: str = "eigh"

    def to_dict(self) -> dict:
        return {
            "rule": self.rule_label,
            "n": self.n,
            "eta": self.eta,
            "gram_residual_spectral_norm": self.gram_residual_spectral_norm,
            "max_exactness_residual": self.max_exactness_residual,
            "exactness_degree_verified": self.exactness_degree_verified,
            "exactness_residuals": list(self.exactness_residuals),
            "method": self.method,
        }


def gram_matrix(rule: QuadratureRule, n: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Discrete Gram matrix G[l, l'] = <p_l, p_l'>_m over P_n."""
    d = dim_poly_space(rule.domain, n)
    if d > cap:
        raise CapExceededError(f"d_n = {d} exceeds cap {cap}")
    B = basis_matrix(rule.domain, n, rule.nodes)
    G = B.T @ (rule.weights[:, None] * B)
    return 0.5 * (G + G.T)


def _spectral_norm_power(M: np.ndarray, tol: float = 1e-12) -> float:
    x = np.ones(M.shape[0]) + np.linspace(0.0, 1.0, M.shape[0])
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(10 * M.shape[0]):
        y = M @ x
        new = float(np.linalg.norm(y))
        if new == 0.0:
            return 0.0
        x = y / new
        if abs(new - lam) <= tol * max(1.0, new):
            return new
        lam = new
    return lam


def mz_eta(rule: QuadratureRule, n: int, cap: int = DEFAULT_CAP, method: str = "auto") -> MZReport:
    """Tightest MZ constant: the spectral norm of G - I for the Gram matrix over P_n.

    For chi = sum c_l p_l, int chi^2 = |c|^2 and sum_j w_j chi(x_j)^2 = c^T G c,
    so max |c^T (G - I) c| / |c|^2 is the smallest admissible eta.
    `method` is "eigh" (dense symmetric eigenvalues), "power" (power iteration,
    tolerance 1e-12, at most 10*d_n steps) or "auto" (eigh below d_n = 600).
    """
    G = gram_matrix(rule, n, cap)
    M = G - np.eye(len(G))
    if method == "auto":
        method = "eigh" if len(G) < EIGH_THRESHOLD else "power"
    if method == "eigh":
        eta = float(np.abs(np.linalg.eigvalsh(M)).max())
    elif method == "power":
        eta = _spectral_norm_power(M)
    else:
        raise ValueError(f"unknown method {method!r}")
    top = max(rule.claimed_exactness, 2 * n)
    resid = exactness_residuals(rule, top)
    ok = resid <= EXACTNESS_TOL
    verified = top if ok.all() else int(np.argmin(ok)) - 1
    return MZReport(
        n=n,
        eta=eta,
        gram_residual_spectral_norm=eta,
        max_exactness_residual=float(resid[: rule.claimed_exactness + 1].max()),
        exactness_degree_verified=verified,
        exactness_residuals=tuple(float(r) for r in resid),
        rule_label=rule.label,
        method=method,
    )


@dataclass(frozen=True)
class MinPointsBound:
    """Lower bounds on m for a rule of exactness n+k.

    `rounded_up` is d_{ceil((n+k)/2)}, the commonly quoted form; `classical`
    is d_{floor((n+k)/2)}, which is what the injectivity argument actually
    yields.  They differ only for odd n+k (two Gauss points are exact on P_3).
    """

    domain: Domain
    n: int
    k: int
    rounded_up_degree: int
    rounded_up: int
    classical_degree: int
    classical: int

    def __int__(self) -> int:
        return self.rounded_up

    def to_dict(self) -> dict:
        return {
            "domain": self.domain.name,
            "n": self.n,
            "k": self.k,
            "rounded_up_degree": self.rounded_up_degree,
            "rounded_up_bound": self.rounded_up,
            "classical_degree": self.classical_degree,
            "classical_bound": self.classical,
        }


def min_points_bound(domain: Domain, n: int, k: int) -> MinPointsBound:
    if not 0 < k <= n:
        raise ValueError(f"need 0 < k <= n, got n={n}, k={k}")
    t = n + k
    rounded_up_degree = t // 2 if t % 2 == 0 else (t + 1) // 2
    classical_degree = t // 2
    return MinPointsBound(
        domain, n, k,
        rounded_up_degree, dim_poly_space(domain, rounded_up_degree),
        classical_degree, dim_poly_space(domain, classical_degree),
    )


def classical_bound_holds(rule: QuadratureRule, exactness: int | None = None) -> bool:
    """m >= d_{floor(t/2)} for a positive rule of exactness t."""
    t = verified_exactness(rule) if exactness is None else exactness
    return rule.m >= dim_poly_space(rule.domain, max(t, 0) // 2)
