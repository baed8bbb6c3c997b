"""Fixtures shared by the unit tests."""
import numpy as np
import pytest


@pytest.fixture
def generator():
    """A freshly seeded random number generator, so that every test
    sees the same random systems and pulses."""
    return np.random.default_rng(20190101)
