import numpy as np
import pytest

from bottlab.symbols import default_triple


@pytest.fixture(scope="session")
def triple():
    return default_triple()


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
