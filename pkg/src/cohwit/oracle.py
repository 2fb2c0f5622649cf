"""Brute-force verifiers used to cross-check the solvers.

Only raw numpy is used here, never solver internals,
so agreement between an oracle and a solver is meaningful.
"""
import numpy as np

PSD_TOL = 1e-9
DETECT_TOL = 1e-9
MIXTURE_TOL = 1e-6


def _mat(w):
    return np.asarray(w, dtype=np.complex128)


def _grid(step, lo=0.0, hi=1.0):
    count = int(round((hi - lo) / step))
    return lo + step * np.arange(count + 1)


def grid_pairwise_psd_search(w1, w2, step=1e-3):
    """First ``lam`` on the grid with ``lam W1 + (1 - lam) W2`` PSD, else None."""
    if not 0 < step <= 0.1:
        raise ValueError("step must lie in (0, 0.1]")
    a, b = _mat(w1), _mat(w2)
    lams = _grid(step)
    mins = np.linalg.eigvalsh(lams[:, None, None] * a + (1 - lams)[:, None, None] * b)[:, 0]
    hits = np.flatnonzero(mins >= -PSD_TOL)
    return float(lams[hits[0]]) if hits.size else None


def _haar_batch(count, d, rng):
    z = rng.normal(size=(count, d)) + 1j * rng.normal(size=(count, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sample_common_detection(ws, trials, seed, tol=DETECT_TOL, batch=1024):
    """Random search for a state detected by every witness.

    Even draws are Haar pure states; odd draws are Dirichlet(1,..,1) mixtures
    of ``2d`` Haar pure states. Draws are generated in batches from a single
    seeded generator, so the result is deterministic given ``seed``. Returns
    the first hit or None.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    mats = np.array([_mat(w) for w in ws])
    d = mats.shape[1]
    rng = np.random.default_rng(seed)
    done = 0
    while done < trials:
        count = min(batch, trials - done)
        npure = (count + 1) // 2
        nmix = count - npure
        pure = _haar_batch(npure, d, rng)
        rhos = np.empty((count, d, d), dtype=np.complex128)
        rhos[0::2] = np.einsum("bi,bj->bij", pure, pure.conj())
        if nmix:
            p = rng.dirichlet(np.ones(2 * d), size=nmix)
            vecs = _haar_batch(nmix * 2 * d, d, rng).reshape(nmix, 2 * d, d)
            rhos[1::2] = np.einsum("bk,bki,bkj->bij", p, vecs, vecs.conj())
        values = np.einsum("kij,bji->bk", mats, rhos).real
        hits = np.flatnonzero(np.all(values < -tol, axis=1))
        if hits.size:
            return rhos[hits[0]]
        done += count
    return None


def grid_mixture_search(rho1, rho2, step=1e-3):
    """Grid ``t`` in ``(0, 1)`` minimizing the off-diagonal norm of ``t rho1 + (1-t) rho2``.

    Returns it if that minimum is at most ``1e-6`` plus the residual an exact
    root half a grid step away would leave, else None.
    """
    if not 0 < step <= 0.01:
        raise ValueError("step must lie in (0, 0.01]")
    a, b = _mat(rho1), _mat(rho2)
    mask = ~np.eye(a.shape[0], dtype=bool)
    ts = _grid(step)[1:-1]
    mix = ts[:, None] * a[mask] + (1 - ts)[:, None] * b[mask]
    norms = np.linalg.norm(mix, axis=1)
    k = int(np.argmin(norms))
    tol = MIXTURE_TOL + step / 2 * np.linalg.norm(a[mask] - b[mask])
    return float(ts[k]) if norms[k] <= tol else None
