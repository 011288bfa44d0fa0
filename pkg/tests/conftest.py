import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from burstnec.config import PI1, PI2, PI3
from burstnec.processes import markov_model, memoryless_model

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

# 4x4 chains on (0, 1, 2, e) for q = 3
Q3_MARKOV = [
    [0.5, 0.2, 0.2, 0.1],
    [0.3, 0.4, 0.1, 0.2],
    [0.1, 0.3, 0.5, 0.1],
    [0.4, 0.3, 0.2, 0.1],
]
Q3_UNIFORM_ROW = [
    [0.3, 0.3, 0.3, 0.1],
    [0.6, 0.2, 0.1, 0.1],
    [0.1, 0.2, 0.6, 0.1],
    [0.2, 0.5, 0.1, 0.2],
]


def random_markov(rng, q, concentration=1.0):
    P = rng.dirichlet(np.full(q + 1, concentration), size=q + 1)
    return markov_model(P)


def reference_models():
    return {
        "pi1": markov_model(PI1),
        "pi2": markov_model(PI2),
        "pi3": markov_model(PI3),
        "memoryless-q2": memoryless_model([0.5, 0.3, 0.2]),
        "memoryless-q3": memoryless_model([0.4, 0.3, 0.2, 0.1]),
        "markov-q3": markov_model(Q3_MARKOV),
        "uniform-row-q3": markov_model(Q3_UNIFORM_ROW),
    }


@pytest.fixture(scope="session")
def models():
    return reference_models()


@pytest.fixture(scope="session")
def pi1():
    return markov_model(PI1)


@st.composite
def markov_models(draw, qs=(2, 3)):
    q = draw(st.sampled_from(qs))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_markov(np.random.default_rng(seed), q)


@st.composite
def noise_models(draw, qs=(2, 3)):
    if draw(st.booleans()):
        return draw(markov_models(qs))
    q = draw(st.sampled_from(qs))
    seed = draw(st.integers(0, 2**32 - 1))
    return memoryless_model(np.random.default_rng(seed).dirichlet(np.ones(q + 1)))
