import numpy as np
import pytest

from grs_squarebreak.gf import GF


@pytest.fixture(scope="session")
def gf2():
    return GF(2)


@pytest.fixture(scope="session")
def gf5():
    return GF(5)


@pytest.fixture(scope="session")
def gf7():
    return GF(7)


@pytest.fixture(scope="session")
def gf16():
    return GF(2, 4, 19)  # X^4 + X + 1


@pytest.fixture(scope="session")
def gf32():
    return GF(2, 5, 37)  # X^5 + X^2 + 1


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
