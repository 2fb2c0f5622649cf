import numpy as np
import pytest

from cohwit import comparability as cmp
from cohwit import matcore, oracle, sampling

from conftest import MINUS, PLUS, W1, W2, W3


def test_grid_psd_examples():
    assert oracle.grid_pairwise_psd_search(W1, W2) == pytest.approx(0.5)
    assert oracle.grid_pairwise_psd_search(W1, W3) is None
    assert oracle.grid_pairwise_psd_search(W1, W1) is None
    with pytest.raises(ValueError):
        oracle.grid_pairwise_psd_search(W1, W2, step=0.5)


def test_sampling_single_witness():
    for seed in range(20):
        rho = oracle.sample_common_detection([W1], 100, seed)
        assert rho is not None
        assert matcore.trace_pair(W1, rho) < -1e-9


def test_sampling_mirror_pair_finds_nothing():
    assert oracle.sample_common_detection([W1, W2], 10_000, 0) is None


def test_sampling_agrees_with_extraction():
    rho = oracle.sample_common_detection([W1, W3], 1000, 1)
    assert rho is not None
    extracted = cmp.extract_common_state([W1, W3])
    for w in (W1, W3):
        assert np.sign(matcore.trace_pair(w, rho)) == np.sign(matcore.trace_pair(w, extracted)) == -1


def test_sampling_deterministic():
    a = oracle.sample_common_detection([W1, W3], 500, 7)
    b = oracle.sample_common_detection([W1, W3], 500, 7)
    assert np.array_equal(a, b)


def test_grid_mixture_examples():
    assert oracle.grid_mixture_search(PLUS, MINUS) == pytest.approx(0.5)
    rng = np.random.default_rng(5)
    rho = sampling.random_coherent_state(3, rng)
    assert oracle.grid_mixture_search(rho, rho) is None
    with pytest.raises(ValueError):
        oracle.grid_mixture_search(PLUS, MINUS, step=0.1)


@pytest.mark.parametrize("seed", range(30))
def test_grid_mixture_planted(seed):
    rng = np.random.default_rng(seed)
    r1, r2, t = sampling.planted_incomparable_states(int(rng.integers(2, 5)), rng)
    found = oracle.grid_mixture_search(r1, r2)
    assert found is not None and abs(found - t) <= 1e-3


def test_oracle_independent_of_solvers():
    import ast
    import inspect

    tree = ast.parse(inspect.getsource(oracle))
    imported = {n.module or "" for n in ast.walk(tree) if isinstance(n, ast.ImportFrom)}
    imported |= {a.name for n in ast.walk(tree) if isinstance(n, ast.Import) for a in n.names}
    assert imported == {"numpy"}
