import numpy as np
import pytest

from krausforge import NoiseChannel, QuantumSystem, bundled_model
from krausforge.bench import default_tau_grid, sweep_time


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def random_matrix(rng, d):
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def make_random_system(rng):
    """Small random system with weak noise: d in {2,3,4}, ||H|| <= 5,
    one or two unit-Frobenius collapse operators with rates <= 0.05."""
    d = int(rng.integers(2, 5))
    h = random_hermitian(rng, d)
    h *= rng.uniform(0.5, 5.0) / np.linalg.norm(h, 2)
    channels = []
    for _ in range(int(rng.integers(1, 3))):
        collapse = random_matrix(rng, d)
        collapse /= np.linalg.norm(collapse)
        channels.append(NoiseChannel(collapse, float(rng.uniform(0.001, 0.05))))
    return QuantumSystem(d, h, channels)


@pytest.fixture(scope="session")
def bundled():
    return bundled_model()


@pytest.fixture(scope="session")
def bundled_time_sweep(bundled):
    """Default-grid time sweep of the baseline methods, shared across tests."""
    return sweep_time(bundled, default_tau_grid(), ["dphi", "first_order"])
