import numpy as np
import pytest
from hypothesis import settings, strategies as st

from freestates import words as W

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def reduced_words(draw, n=None, max_len=8):
    """Random reduced words, built letter by letter without cancellation."""
    rank = draw(st.integers(2, 4)) if n is None else n
    length = draw(st.integers(0, max_len))
    code = []
    for _ in range(length):
        x = draw(st.sampled_from([i for i in range(-rank, rank + 1) if i != 0 and (not code or i != -code[-1])]))
        code.append(x)
    return W.ReducedWord(rank, tuple(code))


@st.composite
def word_pairs(draw, max_len=6):
    n = draw(st.integers(2, 4))
    return draw(reduced_words(n, max_len)), draw(reduced_words(n, max_len))


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def w(text, n=2):
    return W.parse_word(text, n)
