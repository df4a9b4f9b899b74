import numpy as np
import pytest

from edsimo import build_zf, design_equalizer, make_exponential_profile
from edsimo.channel import ChannelProfile


@pytest.fixture(scope="session")
def exp4():
    """The 4-tap exponential-decay profile used throughout the experiments."""
    return make_exponential_profile(4, 1.0)


@pytest.fixture(scope="session")
def flat():
    return ChannelProfile(np.array([1.0]))


@pytest.fixture(scope="session")
def eq13(exp4):
    """Default-length equalizer for the 4-tap profile (J = 13)."""
    return design_equalizer(exp4)


@pytest.fixture(scope="session")
def eq_flat(flat):
    return build_zf(flat, 1, 1)
