import numpy as np
import pytest

from cpwedge.geometry import WedgeConfig


@pytest.fixture
def convex():
    return WedgeConfig(0.75, 0.1)


@pytest.fixture
def concave():
    return WedgeConfig(-0.75, -0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
