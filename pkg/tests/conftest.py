import numpy as np
import pytest

from fracwh.grids import FreqGrid, SpaceGrid


@pytest.fixture(scope="session")
def fgrid():
    return FreqGrid(4096, 64.0)


@pytest.fixture(scope="session")
def fgrid_small():
    return FreqGrid(2048, 64.0)


@pytest.fixture(scope="session")
def sgrid():
    return SpaceGrid(4096, 32.0)


@pytest.fixture(scope="session")
def sgrid_small():
    return SpaceGrid(1024, 32.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
