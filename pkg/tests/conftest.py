"""Shared fixtures: the rush-hour scenario used across the suite."""

import pytest

from pqsim import Constant, QueueSpec, sine_floor


@pytest.fixture
def rush_demand():
    """Sinusoidal pulse with a floor: max(2000 sin(pi t), 1000) vph."""
    return sine_floor(2000, 1000)


@pytest.fixture
def service_1200():
    return Constant(1200)


@pytest.fixture
def queue_200():
    return QueueSpec(capacity=200.0, initial=0.0)
