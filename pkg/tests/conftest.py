import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from weylcert import cube
from weylcert.geometry import RectilinearDomain

settings.register_profile("weylcert", deadline=None, derandomize=True, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("weylcert")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def square():
    return RectilinearDomain([cube(1, 2)])


@pytest.fixture
def unit_cube():
    return RectilinearDomain([cube(1, 3)])
