import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from algebrot import builtin_algebra

settings.register_profile(
    "deterministic",
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("deterministic")


@pytest.fixture(scope="session")
def complex_source():
    return builtin_algebra("complex")


@pytest.fixture(scope="session")
def perplex_source():
    return builtin_algebra("perplex")


@pytest.fixture(scope="session")
def dual_source():
    return builtin_algebra("dual")


@pytest.fixture
def rng():
    return np.random.default_rng(20_240_801)
