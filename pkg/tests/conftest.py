import numpy as np
import pytest

from seqspace.core import GeneralizedMeansParams


def identity_like(n):
    """r = t = 1, s = e_0: the operator reduces to the plain difference."""
    s = np.zeros(n)
    s[0] = 1.0
    return GeneralizedMeansParams(np.ones(n), s, np.ones(n))


def well_conditioned(rng, n):
    """Random params whose s has a dominant leading term, so D stays bounded."""
    s = rng.uniform(-1.0, 1.0, n) * 0.5 ** np.arange(n)
    s[0] = 2.0 + rng.uniform(0.0, 1.0)
    r = rng.uniform(0.5, 2.0, n) * rng.choice([-1.0, 1.0], n)
    t = rng.uniform(0.5, 2.0, n) * rng.choice([-1.0, 1.0], n)
    return GeneralizedMeansParams(r, s, t)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
