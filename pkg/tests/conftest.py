import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260809)


@pytest.fixture(scope="session")
def uniform_dist():
    from selection_games.distributions import uniform

    return uniform()


@pytest.fixture(scope="session")
def two_point_dist():
    from selection_games.distributions import two_point

    return two_point()
