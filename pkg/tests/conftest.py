import numpy as np
import pytest

from natcomp.core import SearchSpace


def sphere(x):
    x = np.asarray(x, dtype=float)
    return float(x @ x)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def space2():
    return SearchSpace.box(-5.0, 5.0, 2)
