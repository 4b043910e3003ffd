import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from iqframes.catalog import _component  # noqa: E402
from iqframes.groupoid import BiAction, FinGroupoid, GAction  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SAMPLES = os.path.join(os.path.dirname(os.path.dirname(__file__)), "samples")


@pytest.fixture(scope="session")
def T():
    return FinGroupoid.trivial()


@pytest.fixture(scope="session")
def Z2():
    return _component(1, "Z2")


@pytest.fixture(scope="session")
def P2():
    return FinGroupoid.pair(2)


@pytest.fixture(scope="session")
def taut(P2):
    """``P2`` acting on its objects ``{1,2}``."""
    return GAction.tautological(P2)


@pytest.fixture(scope="session")
def taut_bi(P2):
    return BiAction.tautological(P2)


@pytest.fixture
def samples():
    return SAMPLES
