import numpy as np
import pytest

from quadbvp import WaveFactorization


def ones_symbol(*args):
    return np.ones(np.broadcast(*args).shape) if len(args) > 1 \
        else np.ones(np.asarray(args[0]).shape)


@pytest.fixture
def trivial_factorization():
    """Factor pair identically one, index 0, on the h=1 lattice."""
    return WaveFactorization(plus_factor=ones_symbol, minus_factor=ones_symbol,
                             index=0.0, h=1.0, label="one")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
