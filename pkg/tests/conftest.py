import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bochner import EuclideanSpace


@pytest.fixture
def rng():
    return np.random.default_rng(20240801)


@pytest.fixture
def c1():
    return EuclideanSpace.complex_space(1)


@pytest.fixture
def c2():
    return EuclideanSpace.complex_space(2)


@pytest.fixture
def c3():
    return EuclideanSpace.complex_space(3)


@pytest.fixture
def h2():
    return EuclideanSpace.quaternionic_space(2)
