import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohwit import matcore
from cohwit.errors import DimensionMismatch, NonHermitianInput, NotADensityMatrix

from conftest import PLUS, W1, W2


def _random_hermitian(seed, d):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2 * rng.uniform(0.01, 10)


def _char_poly_roots(a, step=1e-3, lo=-5, hi=5):
    """Sign changes of det(A - lam I) on a grid; independent of any eigensolver."""
    lams = np.arange(lo, hi + step, step)
    dets = np.array([np.linalg.det(a - lam * np.eye(a.shape[0])).real for lam in lams])
    roots = []
    for k in range(lams.size - 1):
        if dets[k] == 0:
            roots.append(lams[k])
        elif dets[k] * dets[k + 1] < 0:
            roots.append(lams[k] - dets[k] * step / (dets[k + 1] - dets[k]))
    return np.array(roots)


def test_hermitian_symmetrizes_within_tolerance():
    a = W1.copy()
    a[0, 1] += 1e-13
    h = matcore.hermitian(a)
    assert np.array_equal(h, h.conj().T)
    assert not h.flags.writeable


@pytest.mark.parametrize("bad", [
    np.array([[0, 1], [0, 0]]),
    np.eye(3)[:2],
    np.eye(1),
    np.array([[1, 1j], [1j, 1]]),
])
def test_hermitian_rejects(bad):
    with pytest.raises(NonHermitianInput):
        matcore.hermitian(bad)


def test_density_matrix_checks():
    matcore.density_matrix(PLUS)
    with pytest.raises(NotADensityMatrix):
        matcore.density_matrix(2 * PLUS)
    with pytest.raises(NotADensityMatrix):
        matcore.density_matrix(np.diag([1.5, -0.5]))


def test_incoherent_state():
    s = matcore.IncoherentState([0.25, 0.75])
    assert s.dim == 2
    assert np.allclose(s.matrix, np.diag([0.25, 0.75]))
    with pytest.raises(NotADensityMatrix):
        matcore.IncoherentState([1.2, -0.2])


def test_eig_examples():
    w, _ = matcore.eig_hermitian(W1)
    assert np.allclose(w, [-0.5, 0.5], atol=1e-14)
    w, _ = matcore.eig_hermitian(np.eye(3))
    assert np.allclose(w, [1, 1, 1])
    a = np.array([[1, 1j], [-1j, 1]])
    w, _ = matcore.eig_hermitian(a)
    roots = _char_poly_roots(a)
    assert np.allclose(w, [0, 2], atol=1e-12)
    assert np.allclose(roots, w, atol=1e-3)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        matcore.eig_hermitian(np.array([[0, 1], [2, 0]]))


def test_min_eigenpair_examples():
    lam, v = matcore.min_eigenpair(W1)
    assert lam == pytest.approx(-0.5)
    assert abs(abs(np.vdot(v, [1, 1])) / np.sqrt(2) - 1) < 1e-12

    lam, v = matcore.min_eigenpair(np.diag([0.2, 0.8]))
    assert lam == pytest.approx(0.2)
    assert abs(abs(v[0]) - 1) < 1e-12

    # projector witness for psi = (sqrt(3)/2, 1/2): 3/4 I - |psi><psi|
    psi = np.array([np.sqrt(3) / 2, 0.5])
    w = 0.75 * np.eye(2) - np.outer(psi, psi)
    lam, v = matcore.min_eigenpair(w)
    assert lam == pytest.approx(-0.25, abs=1e-12)
    assert np.linalg.norm(w @ v - lam * v) <= 1e-8
    assert lam == pytest.approx(matcore.eig_hermitian(w).eigenvalues[0])


def test_dephase_examples():
    assert np.allclose(matcore.dephase(PLUS), np.diag([0.5, 0.5]))
    d = np.diag([0.3, 0.7])
    assert np.array_equal(matcore.dephase(d), d)
    a = np.array([[0.5, 0.1 - 0.2j], [0.1 + 0.2j, 0.5]])
    assert np.array_equal(matcore.dephase(a), np.diag([0.5, 0.5]))


def test_trace_pair_examples():
    assert matcore.trace_pair(W1, PLUS) == pytest.approx(-0.5)
    a = _random_hermitian(1, 3)
    assert matcore.trace_pair(a, np.eye(3)) == pytest.approx(np.trace(a).real)
    a = np.array([[0, 0.5j], [-0.5j, 0]])
    b = np.array([[0.5, 0.1 - 0.25j], [0.1 + 0.25j, 0.5]])
    # expansion: tr(AB) = (i/2) B_10 - (i/2) B_01 = Im B_01
    assert matcore.trace_pair(a, b) == pytest.approx(-0.25, abs=1e-15)
    with pytest.raises(DimensionMismatch):
        matcore.trace_pair(np.eye(2), np.eye(3))


def test_norm_examples():
    assert matcore.frobenius_norm(W1) == pytest.approx(1 / np.sqrt(2))
    assert matcore.operator_norm(W1) == pytest.approx(0.5)
    assert matcore.frobenius_norm(np.eye(5)) == pytest.approx(np.sqrt(5))
    assert matcore.operator_norm(np.eye(5)) == pytest.approx(1)
    a = np.array([[1, 1j], [-1j, 1]])
    assert matcore.frobenius_norm(a) == pytest.approx(2)
    assert matcore.operator_norm(a) == pytest.approx(2)


def test_is_psd_examples():
    assert matcore.is_psd(np.zeros((2, 2)), 1e-9)
    assert not matcore.is_psd(W1, 1e-9)
    assert matcore.is_psd(W1 + W2, 1e-9)
    with pytest.raises(ValueError):
        matcore.is_psd(W1, -1)


seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 16)


@settings(max_examples=60, deadline=None)
@given(seeds, dims, st.floats(-5, 5))
def test_eig_reconstruction_and_shift(seed, d, c):
    a = _random_hermitian(seed, d)
    w, v = matcore.eig_hermitian(a)
    assert np.all(np.diff(w) >= 0)
    scale = max(1, np.linalg.norm(a))
    assert np.linalg.norm(a - (v * w) @ v.conj().T) <= 1e-9 * scale
    assert np.abs(v.conj().T @ v - np.eye(d)).max() <= 1e-9
    shifted = matcore.eig_hermitian(a + c * np.eye(d)).eigenvalues
    assert np.allclose(shifted, w + c, atol=1e-9 * scale)


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_dephase_projection(seed, d):
    a = _random_hermitian(seed, d)
    b = _random_hermitian(seed + 1, d)
    da = matcore.dephase(a)
    assert np.array_equal(matcore.dephase(da), da)
    assert np.trace(da) == np.trace(a)
    assert np.allclose(matcore.dephase(2 * a - b), 2 * da - matcore.dephase(b), atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_trace_pair_symmetry(seed, d):
    a = _random_hermitian(seed, d)
    b = _random_hermitian(seed + 7, d)
    assert abs(matcore.trace_pair(a, b) - matcore.trace_pair(b, a)) <= 1e-12 * max(1, abs(matcore.trace_pair(a, b)))
    diag_sum = float(np.sum(np.diag(a).real * np.diag(b).real))
    assert matcore.trace_pair(a, matcore.dephase(b)) == pytest.approx(diag_sum, abs=1e-10)
    assert matcore.trace_pair(matcore.dephase(a), b) == pytest.approx(diag_sum, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_norm_sandwich(seed, d):
    a = _random_hermitian(seed, d)
    op, fro = matcore.operator_norm(a), matcore.frobenius_norm(a)
    assert op <= fro * (1 + 1e-12)
    assert fro <= np.sqrt(d) * op * (1 + 1e-12)
