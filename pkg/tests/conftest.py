import numpy as np
import pytest

from divcurl.spectral import TorusGrid, random_field


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def grid1d():
    return TorusGrid(1, 32)


@pytest.fixture
def grid2d():
    return TorusGrid(2, 32)


@pytest.fixture
def grid3d():
    return TorusGrid(3, 16)


@pytest.fixture
def vec2d(grid2d, rng):
    return random_field(grid2d, rng, vector=True)
