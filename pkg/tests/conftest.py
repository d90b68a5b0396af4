import numpy as np
import pytest
from hypothesis import strategies as st

from slicereg.quaternion import Quaternion

components = st.floats(min_value=-1.0, max_value=1.0,
                       allow_nan=False, allow_infinity=False)


@st.composite
def quaternions(draw, max_norm=None):
    q = Quaternion(draw(components), draw(components),
                   draw(components), draw(components))
    if max_norm is not None and abs(q) >= max_norm:
        scale = draw(st.floats(min_value=0.0, max_value=0.99))
        n = abs(q)
        q = q * (scale * max_norm / n) if n > 0 else Quaternion(0.0)
    return q


@pytest.fixture
def rng():
    return np.random.default_rng(20250825)
