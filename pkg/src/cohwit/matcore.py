"""Dense complex Hermitian linear algebra.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The constructors
:func:`hermitian` and :func:`density_matrix` validate their input and return a
read-only symmetrized copy, so downstream code can rely on exact hermiticity.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput, NotADensityMatrix

HERMITIAN_RTOL = 1e-12
DENSITY_EIG_TOL = 1e-9
DENSITY_TRACE_TOL = 1e-10


def _freeze(a):
    a.setflags(write=False)
    return a


def hermitian(a, *, tol=HERMITIAN_RTOL) -> np.ndarray:
    """Validate ``a`` as a Hermitian matrix and return ``(a + a^H)/2``.

    Raises NonHermitianInput if ``a`` is not square, has dimension below 2, or
    deviates from its adjoint by more than ``tol * max(1, max|a_ij|)``.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonHermitianInput(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 2:
        raise NonHermitianInput(f"dimension must be at least 2, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise NonHermitianInput("matrix has non-finite entries")
    scale = max(1.0, float(np.abs(a).max()))
    err = float(np.abs(a - a.conj().T).max())
    if err > tol * scale:
        raise NonHermitianInput(f"max |A - A^H| = {err:.3e} exceeds tolerance", deviation=err)
    return _freeze((a + a.conj().T) / 2)


def density_matrix(a, *, eig_tol=DENSITY_EIG_TOL, trace_tol=DENSITY_TRACE_TOL) -> np.ndarray:
    """Validate ``a`` as a quantum state: Hermitian, PSD and unit trace."""
    rho = hermitian(a)
    tr = float(np.trace(rho).real)
    if abs(tr - 1) > trace_tol:
        raise NotADensityMatrix(f"trace {tr!r} differs from 1", trace=tr)
    lam = float(np.linalg.eigvalsh(rho)[0])
    if lam < -eig_tol:
        raise NotADensityMatrix(f"minimum eigenvalue {lam:.3e} is negative", min_eigenvalue=lam)
    return rho


def pure_state(psi) -> np.ndarray:
    """Projector ``|psi><psi|`` for a unit vector."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    return density_matrix(np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class IncoherentState:
    """A state diagonal in the reference basis, stored by its diagonal."""

    diag: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.diag, dtype=np.float64).reshape(-1)
        if p.size < 2:
            raise NotADensityMatrix("dimension must be at least 2")
        if p.min() < 0 or abs(p.sum() - 1) > DENSITY_TRACE_TOL:
            raise NotADensityMatrix("diagonal must be a probability vector")
        object.__setattr__(self, "diag", _freeze(p.copy()))

    @property
    def dim(self):
        return self.diag.size

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diag.astype(np.complex128))


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_hermitian(a) -> EigenDecomposition:
    """Eigenvalues in ascending order with orthonormal eigenvector columns."""
    a = hermitian(a)
    w, v = np.linalg.eigh(a)
    return EigenDecomposition(w, v)


def min_eigenpair(a):
    """Smallest eigenvalue and a unit eigenvector for it."""
    w, v = eig_hermitian(a)
    return float(w[0]), v[:, 0]


def dephase(a) -> np.ndarray:
    """Diagonal part of ``a`` in the reference basis."""
    a = np.asarray(a)
    return np.diag(np.diag(a)).astype(np.complex128)


def offdiag(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    return a - np.diag(np.diag(a))


def offdiag_norm(a) -> float:
    """Frobenius norm of the off-diagonal part."""
    return float(np.linalg.norm(offdiag(a)))


def trace_pair(a, b) -> float:
    """``tr(AB)`` for Hermitian ``A``, ``B`` (real up to rounding)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    # tr(AB) = sum_ij A_ij B_ji
    return float(np.einsum("ij,ji->", a, b).real)


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


def operator_norm(a) -> float:
    w = np.linalg.eigvalsh(hermitian(a))
    return float(max(abs(w[0]), abs(w[-1])))


def is_psd(a, tol=1e-9) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return float(np.linalg.eigvalsh(hermitian(a))[0]) >= -tol


def check_same_dim(mats):
    dims = {np.asarray(m).shape for m in mats}
    if len(dims) > 1:
        raise DimensionMismatch(f"inputs have differing shapes {sorted(dims)}")
