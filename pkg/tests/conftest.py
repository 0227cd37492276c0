import pytest
from hypothesis import HealthCheck, settings

from rindler_homodyne import AccelerationFrame

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def frame():
    return AccelerationFrame(1.0)
