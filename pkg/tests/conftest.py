import numpy as np
import pytest

from gaugelab.grid import Grid, ScalarField, norm


def gaussian_state(grid, width=1.0, k0=0.0, centre=0.0):
    c = grid.coords
    values = np.exp(-sum((x - centre) ** 2 for x in c) / (2 * width**2) + 1j * k0 * c[0])
    f = ScalarField(grid, values)
    return f * (1.0 / norm(f))


@pytest.fixture
def ring():
    return Grid.box(128, 20.0, "periodic")


@pytest.fixture
def plane():
    return Grid.box((32, 32), 8.0, "periodic")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
