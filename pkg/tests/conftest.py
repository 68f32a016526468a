import numpy as np
import pytest

from nlfm_design.spectral import DesignGrid


@pytest.fixture(scope="session")
def default_grid():
    """The full-scale rendering grid: N=2500, K=8192, M=819."""
    return DesignGrid.create(100e6, 2.5e-6, 1e9)


@pytest.fixture
def toy_grid():
    """Small grid for oracle comparisons: N=8, K=32."""
    return DesignGrid.create(4.0, 1.0, 8.0, transform_length=32)


def random_grid(rng, max_n=16, max_k=64):
    """Random toy grid with N <= max_n and 2N <= K <= max_k."""
    n = int(rng.integers(2, max_n + 1))
    k = int(rng.integers(2 * n, max_k + 1))
    return DesignGrid.create(n / 2.0, 1.0, float(n), transform_length=k)


def unimodular(rng, n):
    return np.exp(2j * np.pi * rng.random(n))
