import numpy as np
import pytest

from uace import llc_new


@pytest.fixture(scope="session")
def standard_spec():
    """Default CLI geometry: 128-bit payloads over 16 sections of 16 bits."""
    return llc_new(16, 16, 8, 2, seed=7)


@pytest.fixture(scope="session")
def tiny_spec():
    """Smallest geometry used for exhaustive cross-checks."""
    return llc_new(4, 4, 2, 2, seed=3)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
