from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from gkpwalk.phase_space import CoherentSuperposition

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

finite = st.floats(min_value=-4.0, max_value=4.0, allow_nan=False, allow_infinity=False)
amp_part = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False)


@st.composite
def states(draw, sigma2=None, max_terms=5, min_terms=1):
    """Random superpositions of up to ``max_terms`` displaced vacua."""
    if sigma2 is None:
        sigma2 = draw(st.sampled_from([0.5, 0.3, 1.0, 1.7]))
    k = draw(st.integers(min_value=min_terms, max_value=max_terms))
    amps = [complex(draw(amp_part), draw(amp_part)) for _ in range(k)]
    if all(a == 0 for a in amps):
        amps[0] = 1.0
    centers = [(draw(finite), draw(finite)) for _ in range(k)]
    return CoherentSuperposition(sigma2, amps, centers)


def random_state(rng, sigma2=0.5, max_terms=5, spread=3.0):
    k = int(rng.integers(1, max_terms + 1))
    amps = rng.normal(size=k) + 1j * rng.normal(size=k)
    centers = rng.uniform(-spread, spread, size=(k, 2))
    return CoherentSuperposition(sigma2, amps, centers)


@pytest.fixture
def rng():
    return np.random.default_rng(20260416)
