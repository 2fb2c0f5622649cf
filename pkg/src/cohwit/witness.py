"""Coherence witnesses: validation, construction recipes and detection.

A coherence witness is a Hermitian ``W`` whose diagonal is nonnegative (so
``tr(W delta) >= 0`` on every incoherent ``delta``) and which has at least one
negative eigenvalue (so some state ``rho`` gives ``tr(W rho) < 0``).
"""
from dataclasses import dataclass

import numpy as np

from . import matcore
from .errors import IncoherentInput, NegativeDiagonal, NoNegativeEigenvalue

DIAG_TOL = 1e-10
NEG_EIG_TOL = 1e-9
DETECT_TOL = 1e-9
OPTIMAL_TOL = 1e-10
COHERENCE_TOL = 1e-20


@dataclass(frozen=True)
class CoherenceWitness:
    mat: np.ndarray
    normalized: bool = False

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)

    @property
    def dim(self):
        return self.mat.shape[0]


@dataclass(frozen=True)
class DetectionReport:
    value: float
    detected: bool
    margin: float


def validate_witness(a) -> CoherenceWitness:
    """Check the two witness conditions and wrap ``a``.

    Raises NegativeDiagonal naming the first offending index, or
    NoNegativeEigenvalue (reporting the minimum eigenvalue) when ``a`` is PSD.
    """
    w = matcore.hermitian(a)
    diag = np.diag(w).real
    bad = np.flatnonzero(diag < -DIAG_TOL)
    if bad.size:
        i = int(bad[0])
        raise NegativeDiagonal(f"diagonal entry {i} is {diag[i]:.3e}", index=i)
    lam = float(np.linalg.eigvalsh(w)[0])
    if lam > -NEG_EIG_TOL:
        raise NoNegativeEigenvalue(f"matrix is positive semidefinite (min eigenvalue {lam:.3e})",
                                   min_eigenvalue=lam)
    normalized = abs(matcore.operator_norm(w) - 1) <= 1e-9
    return CoherenceWitness(w, normalized)


def as_witness(w) -> CoherenceWitness:
    if isinstance(w, CoherenceWitness):
        return w
    return validate_witness(w)


def coherence_weight(rho) -> float:
    """Sum of squared moduli of the off-diagonal entries."""
    return matcore.offdiag_norm(rho) ** 2


def is_coherent(rho) -> bool:
    return coherence_weight(rho) > COHERENCE_TOL


def _require_coherent(rho):
    if not is_coherent(rho):
        raise IncoherentInput("state is diagonal in the reference basis")


def construct_projector_witness(psi) -> CoherenceWitness:
    """``alpha I - |psi><psi|`` with ``alpha = max_i |psi_i|^2``.

    The maximum of ``<psi|delta|psi>`` over incoherent ``delta`` is a linear
    program over the probability simplex, hence attained at a basis state.
    """
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise ValueError("psi must be a unit vector")
    p = np.abs(psi) ** 2
    if np.count_nonzero(p > 1e-24) <= 1:
        raise IncoherentInput("psi is a reference basis vector")
    alpha = p.max()
    return validate_witness(alpha * np.eye(psi.size) - np.outer(psi, psi.conj()))


def construct_dephasing_witness(rho) -> CoherenceWitness:
    """Optimal witness ``Delta(rho) - rho`` (zero diagonal)."""
    rho = matcore.density_matrix(rho)
    _require_coherent(rho)
    return validate_witness(-matcore.offdiag(rho))


def construct_geometric_witness(rho) -> CoherenceWitness:
    """Witness from the closest incoherent state in Frobenius distance.

    That state is ``Delta(rho)``, so ``tr(delta (rho - delta))`` vanishes and the
    witness is ``(Delta(rho) - rho) / ||rho - Delta(rho)||_F``.
    """
    rho = matcore.density_matrix(rho)
    _require_coherent(rho)
    delta = matcore.dephase(rho)
    n = matcore.frobenius_norm(rho - delta)
    shift = matcore.trace_pair(delta, rho - delta)
    w = (delta - rho + shift * np.eye(rho.shape[0])) / n
    return validate_witness(w)


def is_optimal(w) -> bool:
    w = as_witness(w)
    return float(np.abs(np.diag(w.mat)).max()) <= OPTIMAL_TOL


def normalize(w) -> CoherenceWitness:
    w = as_witness(w)
    if w.normalized:
        return w
    return CoherenceWitness(w.mat / matcore.operator_norm(w.mat), True)


def detect(w, rho, tol=DETECT_TOL) -> DetectionReport:
    w = as_witness(w)
    rho = matcore.density_matrix(rho)
    value = matcore.trace_pair(w.mat, rho)
    return DetectionReport(value, value < -tol, abs(value))
