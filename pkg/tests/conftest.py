import pytest
from hypothesis import HealthCheck, settings

from arithindex.core import GtmSequence

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture
def tm():
    """omega_2, the Thue-Morse word."""
    return GtmSequence.of(2)


@pytest.fixture
def gtm3():
    return GtmSequence.of(3)


@pytest.fixture
def gtm5():
    return GtmSequence.of(5)
