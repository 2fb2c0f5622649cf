"""Decision procedures for common witnesses and common coherent states.

Witnesses ``W_1..W_n`` detect a common state unless some nonnegative
combination ``sum_i t_i W_i`` is positive semidefinite. Coherent states
``rho_1..rho_n`` share a common witness unless some strictly positive mixture
``sum_i t_i rho_i`` is incoherent. Each procedure returns a verdict with a
certificate that is checked before it is handed back.
"""
import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import matcore
from .errors import (EmptyInput, ExtractionFailed, InfeasibleProgram,
                     InputIncoherent, NotDetected, PreconditionViolated)
from .lp import linprog
from .witness import CoherenceWitness, as_witness, is_coherent, normalize, validate_witness

PSD_TOL = 1e-9
MARGINAL_BAND = 1e-7
COMMON_STATE_TOL = 1e-8
MIXTURE_TOL = 1e-8
POSITIVE_WEIGHT = 1e-9
DETECT_TOL = 1e-9
BUDGET = 10_000


@dataclass(frozen=True)
class SimplexWeights:
    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float).reshape(-1)
        if t.size == 0 or t.min() < 0 or abs(t.sum() - 1) > 1e-10:
            raise ValueError(f"not a probability vector: {t}")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)

    @property
    def n(self):
        return self.t.size

    @classmethod
    def from_nonnegative(cls, w):
        w = np.maximum(np.asarray(w, dtype=float), 0.0)
        return cls(w / w.sum())


class WitnessVerdict(enum.Enum):
    INCOMPARABLE = "Incomparable"
    COMPARABLE = "Comparable"
    MARGINAL = "Marginal"


class StateVerdict(enum.Enum):
    INCOMPARABLE = "Incomparable"
    COMPARABLE = "Comparable"
    MARGINAL = "Marginal"
    DEGENERATE_BOUNDARY = "DegenerateBoundary"


@dataclass(frozen=True)
class WitnessComparabilityVerdict:
    verdict: WitnessVerdict
    optimum: float
    psd_certificate: Optional[SimplexWeights] = None
    common_state: Optional[np.ndarray] = None


@dataclass(frozen=True)
class StateComparabilityVerdict:
    verdict: StateVerdict
    mixture_certificate: Optional[SimplexWeights] = None
    common_witness: Optional[CoherenceWitness] = None
    boundary_subset: Optional[tuple] = None


def _stack(mats):
    if len(mats) == 0:
        raise EmptyInput("need at least one matrix")
    arrs = [np.asarray(m, dtype=np.complex128) for m in mats]
    matcore.check_same_dim(arrs)
    return np.array([matcore.hermitian(a) for a in arrs])


def _lambda_min(ws, t):
    return float(np.linalg.eigvalsh(np.tensordot(t, ws, axes=1))[0])


def _min_eig(ws, t):
    w, v = np.linalg.eigh(np.tensordot(t, ws, axes=1))
    return float(w[0]), v[:, 0]


def _pairings(ws, v):
    """``(v^H W_i v)_i``, a supergradient of ``t -> lambda_min(sum t_i W_i)``."""
    return np.einsum("i,kij,j->k", v.conj(), ws, v).real


def project_simplex(x):
    """Euclidean projection onto the probability simplex."""
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - 1
    idx = np.arange(1, x.size + 1)
    rho = np.flatnonzero(u - css / idx > 0)[-1]
    return np.maximum(x - css[rho] / (rho + 1), 0.0)


def _golden_section(ws, tol=1e-13):
    # maximize f(lam) = lambda_min(lam W_1 + (1 - lam) W_2), concave on [0, 1]
    f = lambda lam: _lambda_min(ws, np.array([lam, 1 - lam]))
    ratio = (np.sqrt(5) - 1) / 2
    a, b = 0.0, 1.0
    x1, x2 = b - ratio * (b - a), a + ratio * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + ratio * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - ratio * (b - a)
            f1 = f(x1)
    candidates = [(f1, x1), (f2, x2), (f(0.0), 0.0), (f(1.0), 1.0)]
    fbest, lam = max(candidates)
    return np.array([lam, 1 - lam]), fbest


def _supergradient_ascent(ws, budget, window=100, stall=1e-4):
    """Projected supergradient ascent.

    Stops when a window of steps gains less than ``stall`` relative to the
    scale of the matrices; the cutting-plane phase finishes the job.
    """
    n = ws.shape[0]
    scale = max(float(np.abs(np.linalg.eigvalsh(w)).max()) for w in ws)
    t = np.full(n, 1.0 / n)
    best_t, best_f = t, -np.inf
    step0 = 1.0 / max(scale, 1e-300)
    mark = -np.inf
    for k in range(budget):
        f, v = _min_eig(ws, t)
        if f > best_f:
            best_t, best_f = t, f
        if k % window == window - 1:
            if best_f - mark < stall * scale:
                break
            mark = best_f
        g = _pairings(ws, v)
        new = project_simplex(t + step0 / np.sqrt(k + 1) * g)
        if np.abs(new - t).max() < 1e-12:
            break
        t = new
    return best_t, best_f


def _cutting_plane(ws, t, f, gap_tol=1e-10, max_cuts=300):
    """Close the gap left by the ascent with a cutting-plane model.

    Each eigenvector ``v`` gives ``f(t) <= sum_i t_i v^H W_i v`` for all ``t``;
    the master LP maximizes the minimum of these planes and its optimum bounds
    ``sup f`` from above. The LP dual weights ``mu`` over the planes give the
    state ``sum_j mu_j v_j v_j^H`` whose largest trace ``max_i tr(W_i rho)``
    equals that bound. Returns the best point, its value, the bound and that state.
    """
    n = ws.shape[0]
    vecs = [np.linalg.eigh(w)[1][:, 0] for w in ws]
    vecs.append(_min_eig(ws, t)[1])
    planes = [_pairings(ws, v) for v in vecs]
    best_t, best_f = t, f
    upper, state = np.inf, None
    # variables [t, s+, s-]; maximize s subject to s <= plane @ t and sum t = 1
    c = np.zeros(n + 2)
    c[n], c[n + 1] = -1.0, 1.0
    A_eq = np.concatenate([np.ones(n), [0.0, 0.0]])[None, :]
    while True:
        P = np.array(planes)
        A_ub = np.hstack([-P, np.ones((len(planes), 1)), -np.ones((len(planes), 1))])
        res = linprog(c, A_ub=A_ub, b_ub=np.zeros(len(planes)), A_eq=A_eq, b_eq=[1.0])
        if -res.fun < upper:
            upper = -res.fun
            mu = np.maximum(-res.marginals_ub, 0.0)
            V = np.array(vecs).T
            state = (V * (mu / mu.sum())) @ V.conj().T
        tk = project_simplex(res.x[:n])
        fk, v = _min_eig(ws, tk)
        if fk > best_f:
            best_t, best_f = tk, fk
        if upper - best_f <= gap_tol or len(planes) >= max_cuts:
            break
        vecs.append(v)
        planes.append(_pairings(ws, v))
    return best_t, best_f, upper, state


def max_min_eigenvalue_over_simplex(Ws, budget=BUDGET):
    """Maximize the concave ``lambda_min(sum_i t_i W_i)`` over the simplex.

    Golden-section search on the single mixing parameter for two matrices.
    For more, projected supergradient ascent with diminishing steps followed
    by a cutting-plane refinement that certifies the optimum from above.
    """
    ws = _stack(Ws)
    n = ws.shape[0]
    if n == 1:
        t = np.ones(1)
    elif n == 2:
        t, _ = _golden_section(ws)
    else:
        t, f = _supergradient_ascent(ws, budget)
        t, _, _, _ = _cutting_plane(ws, t, f)
    return SimplexWeights(t), _lambda_min(ws, t)


def _max_trace(ws, rho):
    return float(np.einsum("kij,ji->k", ws, rho).real.max())


def project_density(a):
    """Frobenius projection of a Hermitian matrix onto the density matrices."""
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    p = project_simplex(w)
    return (v * p) @ v.conj().T


def _descend(ws, rho, target, budget):
    """Projected subgradient descent on ``max_i tr(W_i rho)``."""
    scale = max(float(np.linalg.norm(w)) for w in ws)
    best, best_g = rho, _max_trace(ws, rho)
    for k in range(budget):
        if best_g <= target:
            break
        vals = np.einsum("kij,ji->k", ws, rho).real
        g = ws[int(np.argmax(vals))]
        rho = project_density(rho - (0.5 / scale) / np.sqrt(k + 1) * g)
        val = _max_trace(ws, rho)
        if val < best_g:
            best, best_g = rho, val
    return best, best_g


def extract_common_state(Ws, weights=None, *, seed=0, budget=BUDGET, restarts=8):
    """A state detected by every witness in ``Ws``.

    Minimizes ``max_i tr(W_i rho)`` over states. The first candidate is the
    minimum eigenvector of the optimal combination ``sum_i t_i W_i``, which
    suffices whenever that eigenvalue is simple. When it is degenerate the
    cutting-plane dual supplies a mixture of eigenvector states. Projected
    subgradient descent with random restarts is the fallback. Raises
    ExtractionFailed if nothing reaches ``-1e-8`` within the budget.
    """
    ws = _stack([np.asarray(as_witness(w)) for w in Ws])
    if weights is None:
        weights, fstar = max_min_eigenvalue_over_simplex(ws, budget)
    else:
        weights = weights if isinstance(weights, SimplexWeights) else SimplexWeights(weights)
        fstar = _lambda_min(ws, weights.t)
    _, v = _min_eig(ws, weights.t)
    # by weak duality no state beats fstar; stop once within reach of it
    target = min(fstar + 1e-9, -COMMON_STATE_TOL)
    best = np.outer(v, v.conj())
    best_g = _max_trace(ws, best)
    if best_g > target:
        _, _, _, dual = _cutting_plane(ws, weights.t, fstar)
        g = _max_trace(ws, dual)
        if g < best_g:
            best, best_g = dual, g
    rng = np.random.default_rng(seed)
    d = ws.shape[1]
    for attempt in range(restarts + 1):
        if best_g <= target:
            break
        if attempt == 0:
            start = best
        else:
            psi = rng.normal(size=d) + 1j * rng.normal(size=d)
            psi /= np.linalg.norm(psi)
            start = np.outer(psi, psi.conj())
        rho, g = _descend(ws, start, target, budget // (restarts + 1))
        if g < best_g:
            best, best_g = rho, g
    if best_g > -COMMON_STATE_TOL:
        raise ExtractionFailed(f"best common value {best_g:.3e} is not below {-COMMON_STATE_TOL}",
                               best_value=best_g)
    return matcore.hermitian(best)


def compare_witnesses(Ws, *, seed=0, budget=BUDGET) -> WitnessComparabilityVerdict:
    if len(Ws) < 2:
        raise EmptyInput("need at least two witnesses")
    wits = [as_witness(w) for w in Ws]
    ws = _stack([w.mat for w in wits])
    weights, opt = max_min_eigenvalue_over_simplex(ws, budget)
    if opt >= -PSD_TOL:
        return WitnessComparabilityVerdict(WitnessVerdict.INCOMPARABLE, opt, psd_certificate=weights)
    try:
        state = extract_common_state(wits, weights, seed=seed, budget=budget)
    except ExtractionFailed:
        state = None
    if opt < -MARGINAL_BAND and state is not None:
        return WitnessComparabilityVerdict(WitnessVerdict.COMPARABLE, opt, common_state=state)
    # undecided: both candidates attached, neither verified
    return WitnessComparabilityVerdict(WitnessVerdict.MARGINAL, opt, psd_certificate=weights,
                                       common_state=state)


def _states(rhos):
    if len(rhos) == 0:
        raise EmptyInput("need at least one state")
    arrs = [matcore.density_matrix(r) for r in rhos]
    matcore.check_same_dim(arrs)
    for k, r in enumerate(arrs):
        if not is_coherent(r):
            raise InputIncoherent(f"state {k} is incoherent", index=k)
    return arrs


def _upper_offdiag(rho):
    iu = np.triu_indices(rho.shape[0], 1)
    return rho[iu]


def _comparable(rhos):
    try:
        w = construct_common_witness(rhos, retry=True, check=False)
    except NotDetected:
        return StateComparabilityVerdict(StateVerdict.MARGINAL)
    return StateComparabilityVerdict(StateVerdict.COMPARABLE, common_witness=normalize(w))


def compare_two_states(rho1, rho2) -> StateComparabilityVerdict:
    """Solve ``t rho1 + (1-t) rho2`` incoherent entry by entry."""
    rho1, rho2 = _states([rho1, rho2])
    x1, x2 = _upper_offdiag(rho1), _upper_offdiag(rho2)
    coef = x1 - x2
    const = -x2
    candidates = []
    for a, b in zip(coef, const):
        if abs(a) < 1e-12:
            if abs(b) < 1e-12:
                continue
            return _comparable([rho1, rho2])
        candidates.append((a, b, b / a))
    if not candidates:
        # both states share no off-diagonal support, so they are not both coherent
        raise InputIncoherent("no off-diagonal entry constrains the mixture")
    a = np.array([c[0] for c in candidates])
    b = np.array([c[1] for c in candidates])
    t = float(np.sum((a.conj() * b).real) / np.sum(np.abs(a) ** 2))
    for _, _, ratio in candidates:
        if abs(ratio.imag) > 1e-8 or abs(ratio.real - t) > 1e-8:
            return _comparable([rho1, rho2])
    if POSITIVE_WEIGHT < t < 1 - POSITIVE_WEIGHT:
        cert = SimplexWeights(np.array([t, 1 - t]))
        mix = t * rho1 + (1 - t) * rho2
        if matcore.offdiag_norm(mix) > MIXTURE_TOL:
            return StateComparabilityVerdict(StateVerdict.MARGINAL, mixture_certificate=cert)
        return StateComparabilityVerdict(StateVerdict.INCOMPARABLE, mixture_certificate=cert)
    if -POSITIVE_WEIGHT <= t <= 1 + POSITIVE_WEIGHT:
        # one state alone is (nearly) incoherent
        subset = (0,) if t > 0.5 else (1,)
        return StateComparabilityVerdict(StateVerdict.DEGENERATE_BOUNDARY, boundary_subset=subset)
    return _comparable([rho1, rho2])


def _offdiag_system(rhos):
    """Rows: real and imaginary parts of each upper off-diagonal entry; columns: states."""
    cols = [_upper_offdiag(r) for r in rhos]
    m = np.array(cols).T
    return np.vstack([m.real, m.imag])


def _max_min_weight(rhos):
    """Maximize ``min_k t_k`` over the affine set of incoherent mixtures.

    The affine set ``{t : sum_k t_k offdiag(rho_k) = 0, sum_k t_k = 1}`` is
    parametrized as ``t0 + N z`` from an SVD, then the piecewise-linear concave
    objective is maximized exactly by a linear program. Returns ``(t, h)`` or
    None if the affine set is empty.
    """
    n = len(rhos)
    A = np.vstack([_offdiag_system(rhos), np.ones((1, n))])
    rhs = np.zeros(A.shape[0])
    rhs[-1] = 1.0
    u, sv, vh = np.linalg.svd(A)
    rank = int(np.sum(sv > 1e-10 * max(1.0, sv[0])))
    t0 = vh[:rank].conj().T @ ((u[:, :rank].T @ rhs) / sv[:rank])
    if np.linalg.norm(A @ t0 - rhs) > 1e-9:
        return None
    null = vh[rank:].T
    if null.shape[1] == 0:
        return t0, float(t0.min())
    # variables [z+, z-, h+, h-] >= 0; maximize h with t0 + N z >= h
    q = null.shape[1]
    c = np.zeros(2 * q + 2)
    c[2 * q] = -1.0
    c[2 * q + 1] = 1.0
    A_ub = np.hstack([-null, null, np.ones((n, 1)), -np.ones((n, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=t0)
    z = res.x[:q] - res.x[q:2 * q]
    t = t0 + null @ z
    return t, float(t.min())


def compare_states(rhos) -> StateComparabilityVerdict:
    if len(rhos) < 2:
        raise EmptyInput("need at least two states")
    arrs = _states(rhos)
    found = _max_min_weight(arrs)
    if found is None:
        return _comparable(arrs)
    t, h = found
    if h > POSITIVE_WEIGHT:
        cert = SimplexWeights.from_nonnegative(t)
        mix = np.tensordot(cert.t, np.array(arrs), axes=1)
        if matcore.offdiag_norm(mix) <= MIXTURE_TOL:
            return StateComparabilityVerdict(StateVerdict.INCOMPARABLE, mixture_certificate=cert)
        return StateComparabilityVerdict(StateVerdict.MARGINAL, mixture_certificate=cert)
    if h < -POSITIVE_WEIGHT:
        return _comparable(arrs)
    subset = tuple(int(k) for k in np.flatnonzero(np.abs(t) <= POSITIVE_WEIGHT))
    return StateComparabilityVerdict(StateVerdict.DEGENERATE_BOUNDARY,
                                     mixture_certificate=SimplexWeights.from_nonnegative(t),
                                     boundary_subset=subset)


def common_witness_weights(rhos) -> SimplexWeights:
    """Weights ``a`` making ``sum_k a_k W_rho_k`` detect every state with the largest margin.

    ``tr(W_rho_k rho_i) = -<offdiag rho_k, offdiag rho_i>``, so this maximizes
    ``min_i (G a)_i`` over the simplex for the Gram matrix ``G``.
    """
    arrs = [matcore.density_matrix(r) for r in rhos]
    m = _offdiag_system(arrs)
    gram = 2 * m.T @ m
    n = len(arrs)
    # variables [a, s+, s-]; maximize s with G a >= s, sum a = 1
    c = np.zeros(n + 2)
    c[n], c[n + 1] = -1.0, 1.0
    A_ub = np.hstack([-gram, np.ones((n, 1)), -np.ones((n, 1))])
    A_eq = np.hstack([np.ones((1, n)), np.zeros((1, 2))])
    try:
        res = linprog(c, A_ub=A_ub, b_ub=np.zeros(n), A_eq=A_eq, b_eq=[1.0])
    except InfeasibleProgram:
        raise NotDetected("no positive weighting detects every state")
    return SimplexWeights.from_nonnegative(res.x[:n])


def construct_common_witness(rhos, weights=None, *, retry=False, check=True) -> CoherenceWitness:
    """``sum_k a_k (Delta(rho_k) - rho_k)``, checked to detect every ``rho_k``.

    Uniform weights by default. With ``retry=True`` a failed uniform attempt is
    repeated once with margin-maximizing weights from :func:`common_witness_weights`.
    Refuses (PreconditionViolated) when the states admit a strictly positive
    incoherent mixture, since then no common witness exists.
    """
    arrs = _states(rhos)
    if check:
        found = _max_min_weight(arrs)
        if found is not None and found[1] > POSITIVE_WEIGHT:
            raise PreconditionViolated("states have an incoherent mixture with positive weights")
    n = len(arrs)
    a = np.full(n, 1.0 / n) if weights is None else np.asarray(
        weights.t if isinstance(weights, SimplexWeights) else weights, dtype=float)
    if a.size != n or np.any(a <= 0):
        raise ValueError("weights must be positive, one per state")
    w = -sum(ak * matcore.offdiag(r) for ak, r in zip(a, arrs))
    vals = [matcore.trace_pair(w, r) for r in arrs]
    failing = [k for k, v in enumerate(vals) if v >= -DETECT_TOL]
    if failing:
        if retry:
            better = common_witness_weights(arrs)
            if np.all(better.t > 0) and not np.allclose(better.t, a):
                return construct_common_witness(arrs, better, check=False)
            if not np.all(better.t > 0):
                # zero weights are allowed in the margin program; nudge into the interior
                nudged = SimplexWeights.from_nonnegative(better.t + 1e-6)
                return construct_common_witness(arrs, nudged, check=False)
        raise NotDetected(f"state {failing[0]} not detected (value {vals[failing[0]]:.3e})",
                          index=failing[0], values=vals)
    return validate_witness(w)

