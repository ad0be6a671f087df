import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from randflight import FlightParams  # noqa: E402
from randflight.montecarlo import project_marginal, simulate_planar, simulate_telegraph  # noqa: E402

MC_N = 10 ** 6
TELEGRAPH_SEED = 20240611
PLANAR_SEED = 977


@pytest.fixture(scope="session")
def base_params():
    """lambda = 1, c = 2."""
    return FlightParams(c=2.0, lam=1.0)


@pytest.fixture(scope="session")
def telegraph_batch(base_params):
    return simulate_telegraph(base_params, 5.0, MC_N, TELEGRAPH_SEED)


@pytest.fixture(scope="session")
def planar_batch(base_params):
    return simulate_planar(base_params, 5.0, MC_N, PLANAR_SEED)


@pytest.fixture(scope="session")
def marginal_batch(planar_batch):
    return project_marginal(planar_batch, 1)
