import numpy as np
import pytest

from gaussqfi.check import sample_params


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_params(rng):
    return [sample_params(rng) for _ in range(50)]
