"""Seeded random instances: states, witnesses and planted comparability problems.

Every function takes a ``numpy.random.Generator`` so callers control seeding.
"""
import numpy as np

from . import matcore
from .witness import NEG_EIG_TOL


def haar_pure_vector(d, rng):
    """Haar-random unit vector from a normalized complex Gaussian."""
    z = rng.normal(size=d) + 1j * rng.normal(size=d)
    return z / np.linalg.norm(z)


def haar_pure_state(d, rng):
    psi = haar_pure_vector(d, rng)
    return np.outer(psi, psi.conj())


def random_density_matrix(d, rng, rank=None):
    """Dirichlet(1,..,1) mixture of ``rank`` Haar pure states (default ``2d``)."""
    rank = 2 * d if rank is None else rank
    weights = rng.dirichlet(np.ones(rank))
    vecs = np.array([haar_pure_vector(d, rng) for _ in range(rank)])
    rho = np.einsum("k,ki,kj->ij", weights, vecs, vecs.conj())
    return (rho + rho.conj().T) / 2


def random_coherent_state(d, rng, pure=False):
    return haar_pure_state(d, rng) if pure else random_density_matrix(d, rng)


def random_incoherent_state(d, rng):
    return np.diag(rng.dirichlet(np.ones(d))).astype(np.complex128)


def random_hermitian(d, rng):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2


def random_witness(d, rng, optimal=False):
    """A random witness: GUE off-diagonal part plus a nonnegative diagonal.

    The diagonal is drawn until a negative eigenvalue survives; the zero
    diagonal (``optimal=True``) always qualifies because the matrix is then
    traceless and nonzero.
    """
    off = matcore.offdiag(random_hermitian(d, rng))
    while True:
        diag = np.zeros(d) if optimal else rng.exponential(scale=0.5, size=d) * rng.integers(0, 2, size=d)
        w = off + np.diag(diag)
        if np.linalg.eigvalsh(w)[0] < -100 * NEG_EIG_TOL:
            return w / np.abs(np.linalg.eigvalsh(w)).max()


def random_psd(d, rng, rank=None):
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    return g @ g.conj().T


def planted_incomparable_witnesses(d, rng, n=2, margin=0.05):
    """Witnesses ``W_1..W_n`` with ``sum_i a_i W_i`` positive definite by construction.

    ``W_n = (Q - offdiag(S)) / c`` where ``S = sum_{i<n} a_i W_i`` and ``Q``
    is positive definite with smallest eigenvalue at least ``margin``. Then
    ``S + c W_n = Delta(S) + Q`` is positive definite and ``diag(W_n) = diag(Q)/c >= 0``.
    Redrawn until ``W_n`` has a negative eigenvalue.
    """
    while True:
        ws = [random_witness(d, rng) for _ in range(n - 1)]
        a = rng.uniform(0.2, 1.0, size=n - 1)
        s = sum(ai * wi for ai, wi in zip(a, ws))
        q = random_psd(d, rng)
        q = q / np.abs(np.linalg.eigvalsh(q)).max() * rng.uniform(0.05, 0.6) + margin * np.eye(d)
        last = q - matcore.offdiag(s)
        if np.linalg.eigvalsh(last)[0] < -1e-3:
            return ws + [last / np.abs(np.linalg.eigvalsh(last)).max()]


def planted_incomparable_states(d, rng):
    """``(rho1, rho2, t)`` with ``t rho1 + (1-t) rho2`` incoherent, ``t`` in (0.1, 0.9).

    ``rho1 = delta + E`` and ``rho2 = delta - (t/(1-t)) E`` for a zero-diagonal
    Hermitian ``E`` shrunk until both are PSD.
    """
    t = rng.uniform(0.1, 0.9)
    delta = np.diag(rng.dirichlet(np.ones(d) * 2)).astype(np.complex128)
    e = matcore.offdiag(random_hermitian(d, rng))
    ratio = t / (1 - t)
    scale = 1.0
    for _ in range(200):
        r1, r2 = delta + scale * e, delta - ratio * scale * e
        if np.linalg.eigvalsh(r1)[0] > 1e-6 and np.linalg.eigvalsh(r2)[0] > 1e-6:
            break
        scale *= 0.7
    return r1, r2, t
