import pytest
from hypothesis import HealthCheck, settings

from padelab import PoleSequence, build_counterexample_series

settings.register_profile(
    "suite",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def harmonic_poles():
    return PoleSequence.harmonic(6)


@pytest.fixture(scope="session")
def k2_series():
    # c = (1, 256, 16, 64, 256), poles z_2 = 1/4
    return build_counterexample_series(2, PoleSequence.harmonic(2))


@pytest.fixture(scope="session")
def k3_series():
    return build_counterexample_series(3, PoleSequence.harmonic(3))
