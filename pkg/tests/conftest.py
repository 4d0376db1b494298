import numpy as np
import pytest
from hypothesis import settings

from entrev import Alphabet, Sequence, TransitionMatrix

settings.register_profile("ci", deadline=None, derandomize=True)
settings.load_profile("ci")


def make_seq(ids, alphabet_size):
    return Sequence(np.asarray(ids, dtype=np.int64), Alphabet(tuple(range(alphabet_size))))


@pytest.fixture
def two_state_chain():
    """The lopsided two-state chain with stationary vector (2/3, 1/3)."""
    return TransitionMatrix([[0.9, 0.1], [0.2, 0.8]])
