import numpy as np
import pytest

from src.core.kernel_space import build_szego, orthonormal_space
from src.core.operator import Operator


@pytest.fixture
def orthonormal_pair():
    return orthonormal_space(2)


@pytest.fixture
def szego_pair():
    return build_szego([0, 0.5])


@pytest.fixture
def nilpotent():
    return Operator([[0, 1], [0, 0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
