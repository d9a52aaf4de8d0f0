import numpy as np
import pytest

from matsharp import EnsembleSpec, random_hermitian, random_pd


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def hermitian_for(seed, n=6, field="complex"):
    return random_hermitian(EnsembleSpec(dim=n, kind="hermitian", seed=seed, field=field))


def pd_for(seed, n=4, kappa=100.0):
    return random_pd(EnsembleSpec(dim=n, seed=seed, condition_target=kappa))
