import math

import numpy as np
import pytest

import cyclobloch as cb

TJ = 2.0 * math.pi  # tunneling period at j_x = 1


@pytest.fixture
def slow_params():
    """Reference slow-driving parameters (transporting regime)."""
    return cb.ModelParams(j_x=1.0, j_y=1.0, alpha=0.1, omega_x=0.0, omega_y=0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def random_state_1d(rng, lattice):
    a = rng.normal(size=lattice.n_sites) + 1j * rng.normal(size=lattice.n_sites)
    return cb.State1D(a / np.linalg.norm(a), lattice)


def random_state_2d(rng, lattice):
    a = rng.normal(size=(lattice.n_x, lattice.n_y)) + 1j * rng.normal(
        size=(lattice.n_x, lattice.n_y)
    )
    return cb.State2D(a / np.linalg.norm(a), lattice)
