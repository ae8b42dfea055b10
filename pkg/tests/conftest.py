import numpy as np
import pytest

from nhls import ModelParams


@pytest.fixture
def params():
    """Standard working point: J=1, delta=0.5, gamma=0.5 (coalescence)."""
    return ModelParams(J=1.0, delta=0.5, gamma=0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
