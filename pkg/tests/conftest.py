import numpy as np
import pytest

from branchlaw import build_moment_table, build_tables


@pytest.fixture(scope="session")
def tables():
    return build_tables()


@pytest.fixture(scope="session")
def mtable():
    return build_moment_table(1.0, 40)


@pytest.fixture()
def rng():
    return np.random.Generator(np.random.Philox(12345))
