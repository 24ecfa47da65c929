"""The toral-basis re-alignment search: generators, objective, recovery."""

import numpy as np
import pytest

from f4e8 import hillclimb
from f4e8.cli import toral_basis


@pytest.fixture(scope="module")
def gens(alg):
    return hillclimb.InnerGenerators(alg)


@pytest.fixture(scope="module")
def targets(basis):
    return toral_basis(basis)


def test_generator_count(gens):
    assert gens.count == 480
    assert len(set(gens.labels)) == 480


def test_generator_inverse_pairs(gens, alg):
    # generator 2i is x_gamma(+1), 2i+1 is x_gamma(-1)
    for i in (0, 7, 100):
        prod = alg.field.mat_mul(gens.matrix(2 * i), gens.matrix(2 * i + 1))
        assert alg.field.mat_equal(prod, alg.field.identity(alg.dim))


def test_single_cartan_generator_objective(gens, alg):
    h = alg.h(4)  # the simple coroot h_{00010000}
    assert hillclimb.objective(alg, h.reshape(-1, 1)) == 240


def test_toral_basis_is_toral_and_aligned(alg, targets):
    hillclimb.check_toral_basis(alg, targets)
    assert hillclimb.objective(alg, targets) == 960


def test_root_vector_is_not_toral(alg):
    e = alg.e(alg.rs.roots[0])
    assert not hillclimb.is_toral(alg, e)
    with pytest.raises(hillclimb.NotToralError):
        hillclimb.check_toral_basis(alg, e.reshape(-1, 1))


def test_already_aligned_returns_immediately(gens, targets):
    state = hillclimb.climb(gens, targets, budget=10, seed=0)
    assert state.objective == 960
    assert state.history == []


def test_scramble_recover_and_replay(gens, alg, targets):
    scrambled, word = hillclimb.scramble(gens, targets, 10, seed=7)
    assert len(word) == 10
    assert hillclimb.objective(alg, scrambled) < 960
    state = hillclimb.recover(gens, scrambled, seed=0, budget=1000)
    assert state.objective == 960
    replayed = hillclimb.replay(gens, scrambled, state.history)
    assert np.array_equal(replayed, state.targets)
    # determinism: a second run takes the identical path
    again = hillclimb.recover(gens, scrambled, seed=0, budget=1000)
    assert again.history == state.history


def test_aligned_targets_have_diagonal_ad(gens, alg, targets):
    for j in range(targets.shape[1]):
        ad = alg.ad_matrix(targets[:, j])
        assert np.array_equal(ad, np.diag(np.diag(ad)))
