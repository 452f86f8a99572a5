import numpy as np
import pytest

from orlicz import Constant, Power, counting_space, grid_space


@pytest.fixture
def p2():
    return Constant(Power(2))


@pytest.fixture
def counting3():
    return counting_space(3)


@pytest.fixture
def counting64():
    return counting_space(64)


@pytest.fixture(scope="session")
def weighted_grid():
    """The truncated half-line grid used by the non-uniform weight scenario."""
    return grid_space(0.0, 200.0, 20000)


def make_fn(space, values):
    out = np.zeros(space.n_atoms)
    out[: len(values)] = values
    return out
