"""Robustness of coherence.

The robustness of ``rho`` is the least ``s >= 0`` such that ``(rho + s tau)/(1+s)``
is incoherent for some state ``tau``. Writing ``D = rho + s tau`` (diagonal,
trace ``1+s``) turns this into

    minimize tr(D) - 1   over diagonal D   subject to   D - rho >= 0,

a convex program in the ``d`` diagonal entries. It is solved by a cutting-plane
method: every vector ``v`` gives a valid linear cut ``sum_i |v_i|^2 D_i >= v^H rho v``,
cuts come from negative eigenvectors of ``D - rho`` and from supporting
hyperplanes at boundary points found by line search toward a strictly feasible
centre, and the master linear program supplies a certified lower bound.
"""
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import matcore
from .comparability import StateVerdict, compare_two_states
from .errors import ConvergenceWarning, TauUndefined
from .lp import linprog

GAP_TOL = 1e-7
MAX_CUTS = 500
TAU_MIN_S = 1e-6


@dataclass
class RobustnessResult:
    value: float
    diagonal: np.ndarray
    tau: Optional[np.ndarray]
    delta: matcore.IncoherentState
    lower_bound: float
    gap: float
    cuts: int
    converged: bool = True


def robustness_pure_oracle(psi) -> float:
    """Closed form ``(sum_i |psi_i|)^2 - 1`` for a pure state."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise ValueError("psi must be a unit vector")
    return float(np.abs(psi).sum() ** 2 - 1)


def _cut(v):
    return np.abs(v) ** 2


def _boundary_point(center, target, rho):
    """Largest step from ``center`` toward ``target`` keeping ``D - rho`` PSD."""
    m0 = np.diag(center) - rho
    chol = np.linalg.cholesky(m0)
    linv = np.linalg.inv(chol)
    step = linv @ np.diag(target - center) @ linv.conj().T
    lam = float(np.linalg.eigvalsh((step + step.conj().T) / 2)[0])
    theta = 1.0 if lam >= -1.0 else -1.0 / lam
    return center + theta * (target - center)


def _make_feasible(dvec, rho):
    lam, v = matcore.min_eigenpair(np.diag(dvec) - rho)
    if lam < 0:
        dvec = dvec - lam
    return dvec, v


def robustness(rho, *, gap_tol=GAP_TOL, max_cuts=MAX_CUTS) -> RobustnessResult:
    rho = matcore.density_matrix(rho)
    d = rho.shape[0]
    p = np.diag(rho).real.copy()

    if matcore.offdiag_norm(rho) == 0.0:
        p = np.maximum(p, 0.0)
        return RobustnessResult(0.0, p, None, matcore.IncoherentState(p / p.sum()), 0.0, 0.0, 0)

    # diagonal dominance gives a feasible point; push it strictly inside
    radius = np.abs(matcore.offdiag(rho)).sum(axis=1)
    center = p + radius + 1e-3 * (1 + radius.max())
    best = p + radius
    best, _ = _make_feasible(best, rho)
    upper = best.sum() - 1

    cuts = [_cut(e) for e in np.eye(d)]
    rhs = list(p)
    lower = -np.inf
    converged = False
    basis = None
    while len(cuts) <= max_cuts:
        # dual of the master LP: max rhs@y s.t. cuts^T y <= 1, y >= 0; D is its dual
        C = np.array(cuts)
        if basis is not None:
            # slack columns moved right by the number of cuts added since
            basis = np.where(basis >= ncut, basis + len(cuts) - ncut, basis)
        ncut = len(cuts)
        res = linprog(-np.array(rhs), A_ub=C.T, b_ub=np.ones(d), warm_basis=basis)
        basis = res.basis
        dvec = -res.marginals_ub
        lower = max(lower, float(dvec.sum()) - 1)
        if upper - lower <= gap_tol * max(1.0, abs(upper)):
            converged = True
            break

        w, vecs = np.linalg.eigh(np.diag(dvec) - rho)
        for j in np.flatnonzero(w < 0)[:3]:
            cuts.append(_cut(vecs[:, j]))
            rhs.append(float((vecs[:, j].conj() @ rho @ vecs[:, j]).real))

        shifted, _ = _make_feasible(dvec, rho)
        if shifted.sum() - 1 < upper:
            best, upper = shifted, shifted.sum() - 1
        bnd = _boundary_point(center, dvec, rho)
        bnd, v = _make_feasible(bnd, rho)
        if bnd.sum() - 1 < upper:
            best, upper = bnd, bnd.sum() - 1
        # midpoint of an interior point and a feasible point stays interior
        center = (center + best) / 2
        cuts.append(_cut(v))
        rhs.append(float((v.conj() @ rho @ v).real))
        if upper - lower <= gap_tol * max(1.0, abs(upper)):
            converged = True
            break

    if not converged:
        warnings.warn(f"robustness cut budget exhausted with gap {upper - lower:.3e}",
                      ConvergenceWarning, stacklevel=2)

    s = float(best.sum() - 1)
    tau = None
    if s > TAU_MIN_S:
        tau = (np.diag(best) - rho) / s
        tau = (tau + tau.conj().T) / 2
    delta = matcore.IncoherentState(best / best.sum())
    return RobustnessResult(s, best, tau, delta, lower, upper - lower, len(cuts), converged)


def verify_corollary2(rho, tol=1e-6) -> bool:
    """A state and its robustness-optimal ``tau`` share no coherence witness.

    True iff ``rho`` and ``tau`` are found incomparable with the incoherent
    mixture at weight ``1/(1+s)`` on ``rho``.
    """
    res = robustness(rho)
    if res.value <= TAU_MIN_S or res.tau is None:
        raise TauUndefined(f"robustness {res.value:.3e} too small for tau to be defined")
    verdict = compare_two_states(rho, res.tau)
    if verdict.verdict is not StateVerdict.INCOMPARABLE:
        return False
    t = verdict.mixture_certificate.t[0]
    return abs(t - 1 / (1 + res.value)) <= tol
