import random

import pytest

from support import GOLD_SENTENCES, make_store


@pytest.fixture
def gold_store():
    return make_store(GOLD_SENTENCES)


@pytest.fixture
def rng():
    return random.Random(1234)
