import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_symmetric(rng, n, scale=1.0):
    g = rng.standard_normal((n, n)) * scale
    return 0.5 * (g + g.T)


def random_pd(rng, n, jitter=0.5):
    g = rng.standard_normal((n, n))
    return g @ g.T / n + jitter * np.eye(n)
