import numpy as np
import pytest

from support import example1_context, example2_context


@pytest.fixture(scope="session")
def ctx_example1():
    return example1_context()


@pytest.fixture(scope="session")
def ctx_example2():
    return example2_context()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
