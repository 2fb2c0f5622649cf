"""Small dense linear programs by the two-phase tableau simplex method.

    minimize    c @ x
    subject to  A_ub @ x <= b_ub,  A_eq @ x == b_eq,  x >= 0

Sizes here are tiny (tens of rows, a few hundred columns), so a dense tableau
with Dantzig pricing is adequate. After a run of degenerate pivots the solver
switches to Bland's rule for good, which rules out cycling. Final primal and
dual values are recomputed from the original data and the optimal basis, so
they do not carry the rounding accumulated by the tableau updates.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleProgram, UnboundedProgram

PIVOT_TOL = 1e-11
COST_TOL = 1e-12
FEAS_TOL = 1e-9
MAX_DEGENERATE = 50


@dataclass
class LPResult:
    x: np.ndarray
    fun: float
    # sensitivity of the optimum to each right-hand side, as in scipy.optimize.linprog
    marginals_ub: np.ndarray
    marginals_eq: np.ndarray
    iterations: int
    # column indices (structural first, then slacks) of the optimal basis
    basis: np.ndarray = None


def _pivot(T, row, col):
    T[row] /= T[row, col]
    factor = T[:, col].copy()
    factor[row] = 0.0
    T -= np.outer(factor, T[row])


def _run_simplex(T, basis, ncols, max_iter):
    """Optimize the tableau in place; the last row holds reduced costs."""
    m = T.shape[0] - 1
    bland = False
    degenerate = 0
    for it in range(max_iter):
        cost = T[-1, :ncols]
        scale = max(1.0, float(np.abs(cost).max()))
        candidates = np.flatnonzero(cost < -COST_TOL * scale)
        if candidates.size == 0:
            return it
        col = int(candidates[0]) if bland else int(candidates[np.argmin(cost[candidates])])
        column = T[:m, col]
        colscale = max(1.0, float(np.abs(column).max()))
        positive = np.flatnonzero(column > PIVOT_TOL * colscale)
        if positive.size == 0:
            raise UnboundedProgram("objective is unbounded below")
        ratios = T[positive, -1] / column[positive]
        best = ratios.min()
        ties = positive[ratios <= best + 1e-14 * max(1.0, abs(best))]
        # Bland: among ties leave the basic variable with smallest index
        row = int(ties[np.argmin(basis[ties])]) if bland else int(ties[0])
        if best <= 1e-14:
            degenerate += 1
            if degenerate > MAX_DEGENERATE:
                bland = True
        else:
            degenerate = 0
        _pivot(T, row, col)
        basis[row] = col
    raise RuntimeError("simplex iteration limit reached")


def linprog(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, max_iter=10_000,
            warm_basis=None) -> LPResult:
    """Solve the program; ``warm_basis`` may name a primal feasible basis to start from.

    A warm basis is only used for inequality-only programs; it is ignored if it
    is singular or infeasible.
    """
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).reshape(-1)
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).reshape(-1)
    mu, me = A_ub.shape[0], A_eq.shape[0]
    m = mu + me

    # rows: [A_ub | I] and [A_eq | 0], flipped so every right-hand side is >= 0
    A = np.zeros((m, n + mu))
    A[:mu, :n] = A_ub
    A[:mu, n:] = np.eye(mu)
    A[mu:, :n] = A_eq
    b = np.concatenate([b_ub, b_eq])
    sign = np.where(b < 0, -1.0, 1.0)
    A *= sign[:, None]
    b = b * sign

    needs_art = np.ones(m, dtype=bool)
    needs_art[:mu] = sign[:mu] < 0
    art_rows = np.flatnonzero(needs_art)
    k = art_rows.size
    ncols = n + mu + k

    T = np.zeros((m + 1, ncols + 1))
    T[:m, : n + mu] = A
    T[art_rows, n + mu + np.arange(k)] = 1.0
    T[:m, -1] = b
    basis = np.empty(m, dtype=int)
    basis[~needs_art] = n + np.flatnonzero(~needs_art[:mu])
    basis[art_rows] = n + mu + np.arange(k)

    iterations = 0
    warm = _warm_tableau(A, b, warm_basis, n + mu) if warm_basis is not None and me == 0 else None
    if warm is not None:
        T, basis = warm
        k = 0
        ncols = n + mu
        keep = np.ones(m, dtype=bool)
    elif k:
        T[-1, n + mu:ncols] = 1.0
        T[-1] -= T[art_rows].sum(axis=0)
        iterations += _run_simplex(T, basis, ncols, max_iter)
        if -T[-1, -1] > FEAS_TOL * max(1.0, float(np.abs(b).max())):
            raise InfeasibleProgram(f"phase one residual {-T[-1, -1]:.3e}")
        # drive artificials out of the basis; rows that cannot pivot are redundant
        keep = np.ones(m, dtype=bool)
        for row in np.flatnonzero(basis >= n + mu):
            entries = np.abs(T[row, : n + mu])
            col = int(np.argmax(entries))
            if entries[col] > 1e-9:
                _pivot(T, row, col)
                basis[row] = col
            else:
                keep[row] = False
        T = np.vstack([T[:m][keep], T[-1:]])
        basis = basis[keep]
        T = np.delete(T, np.s_[n + mu:ncols], axis=1)
        ncols = n + mu
    else:
        keep = np.ones(m, dtype=bool)

    cfull = np.zeros(ncols)
    cfull[:n] = c
    T[-1, :] = 0.0
    T[-1, :ncols] = cfull
    T[-1] -= cfull[basis] @ T[:-1]
    iterations += _run_simplex(T, basis, ncols, max_iter)

    # exact recomputation on the original rows
    rows = np.flatnonzero(keep)
    B = A[rows][:, basis]
    xfull = np.zeros(ncols)
    xfull[basis] = np.linalg.solve(B, b[rows])
    xfull[np.abs(xfull) < 1e-15] = 0.0
    y = np.zeros(m)
    y[rows] = np.linalg.solve(B.T, cfull[basis])
    y *= sign
    x = np.maximum(xfull[:n], 0.0)
    return LPResult(x, float(c @ x), y[:mu], y[mu:], iterations, basis.copy())


def _warm_tableau(A, b, basis, ncols):
    basis = np.asarray(basis, dtype=int)
    if basis.size != A.shape[0] or len(set(basis.tolist())) != basis.size:
        return None
    try:
        binv = np.linalg.inv(A[:, basis])
    except np.linalg.LinAlgError:
        return None
    rhs = binv @ b
    if rhs.min() < -1e-12:
        return None
    T = np.zeros((A.shape[0] + 1, ncols + 1))
    T[:-1, :ncols] = binv @ A
    T[:-1, -1] = np.maximum(rhs, 0.0)
    return T, basis.copy()
