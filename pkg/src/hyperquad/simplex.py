"""Dense two-phase tableau simplex for small standard-form linear programs.

    minimise c @ x  subject to  A @ x = b,  x >= 0

Entering columns follow Dantzig's most-negative reduced cost.  Ratio-test
ties are broken lexicographically on the rows of B^-1 (carried in the
artificial columns), which rules out cycling on the heavily degenerate
moment systems this package produces.  Bland's smallest-index rule is the
fallback if the lexicographic comparison itself ties within tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class LPError(Exception):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass
class LPResult:
    x: np.ndarray
    fun: float
    basis: np.ndarray
    iterations: int


def _pivot(T, row, col):
    T[row] /= T[row, col]
    piv = T[row]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, piv)


def _leaving_row(T, col, basis, lex_cols, tol):
    column = T[:-1, col]
    candidates = np.flatnonzero(column > tol)
    if candidates.size == 0:
        return None
    # Lexicographic minimum of [rhs, B^-1 row] / pivot over the candidates.
    keys = np.column_stack([T[candidates, -1], T[np.ix_(candidates, lex_cols)]])
    keys /= column[candidates, None]
    for j in range(keys.shape[1]):
        best = keys[:, j].min()
        close = keys[:, j] <= best + tol * max(1.0, abs(best))
        candidates, keys = candidates[close], keys[close]
        if candidates.size == 1:
            return candidates[0]
    return candidates[np.argmin(basis[candidates])]


def _run(T, basis, allowed, lex_cols, tol, max_iter):
    """Pivot until no allowed column has negative reduced cost."""
    it = 0
    while True:
        reduced = T[-1, allowed]
        negative = np.flatnonzero(reduced < -tol)
        if negative.size == 0:
            return it
        col = allowed[negative[np.argmin(reduced[negative])]]
        row = _leaving_row(T, col, basis, lex_cols, tol)
        if row is None:
            raise Unbounded("objective is unbounded below")
        _pivot(T, row, col)
        basis[row] = col
        it += 1
        if it > max_iter:
            raise LPError(f"simplex exceeded {max_iter} iterations")


def simplex(c, A_eq, b_eq, tol=1e-10, max_iter=20_000) -> LPResult:
    """Solve min c@x s.t. A_eq@x = b_eq, x >= 0.

    The returned x is recomputed from the final basis by a direct dense
    solve, so equality residuals sit at LU-solve level rather than at the
    level of accumulated pivot roundoff.
    """
    c = np.asarray(c, dtype=float)
    A = np.array(A_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    n_rows, n_cols = A.shape
    if c.shape != (n_cols,) or b.shape != (n_rows,):
        raise ValueError("inconsistent LP dimensions")

    # Entries at roundoff level are exact zeros; scaling must not amplify them.
    A[np.abs(A) <= 1e-13 * np.abs(A).max()] = 0.0
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    scale = np.maximum(np.abs(A).max(axis=1), 1e-300)
    A /= scale[:, None]
    b /= scale

    art = np.arange(n_cols, n_cols + n_rows)
    T = np.zeros((n_rows + 1, n_cols + n_rows + 1))
    T[:n_rows, :n_cols] = A
    T[:n_rows, art] = np.eye(n_rows)
    T[:n_rows, -1] = b
    T[-1, :n_cols] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = art.copy()
    all_cols = np.arange(n_cols + n_rows)
    iters = _run(T, basis, all_cols, art, tol, max_iter)
    if -T[-1, -1] > 1e3 * tol * max(1.0, b.max()):
        raise Infeasible(f"no feasible point (phase-1 residual {-T[-1, -1]:.3e})")

    # Pivot artificials out where possible; rows where that fails are redundant.
    keep = np.ones(n_rows, dtype=bool)
    for row in range(n_rows):
        if basis[row] >= n_cols:
            entries = np.abs(T[row, :n_cols])
            col = int(np.argmax(entries))
            if entries[col] > 1e3 * tol:
                _pivot(T, row, col)
                basis[row] = col
            else:
                keep[row] = False
    rows = np.flatnonzero(keep)
    T = T[np.append(rows, n_rows)]
    basis = basis[rows]

    T[-1] = 0.0
    T[-1, :n_cols] = c
    T[-1] -= c[basis] @ T[:-1]
    iters += _run(T, basis, np.arange(n_cols), art, tol, max_iter)

    x = np.zeros(n_cols)
    x[basis] = np.linalg.solve(A[np.ix_(rows, basis)], b[rows])
    x = np.maximum(x, 0.0)
    return LPResult(x=x, fun=float(c @ x), basis=basis.copy(), iterations=iters)
