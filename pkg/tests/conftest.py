import numpy as np
import pytest
from hypothesis import strategies as st

from nlgrad.kernel import DiscreteKernel


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def decreasing_weights(draw, max_M=8):
    vals = draw(st.lists(st.floats(0.05, 10.0, allow_nan=False), min_size=1, max_size=max_M, unique=True))
    return sorted(vals, reverse=True)


@st.composite
def discrete_kernels(draw, max_M=8):
    return DiscreteKernel(draw(decreasing_weights(max_M)))
