import sys
from pathlib import Path

import pytest

from invsg import corpus, generate

sys.path.insert(0, str(Path(__file__).parent))

CORPUS = corpus()
SMALL = corpus(max_size=8)
TINY = corpus(max_size=6)


def raw(S):
    return [list(row) for row in S.table]


@pytest.fixture(params=sorted(CORPUS), ids=str)
def any_sg(request):
    return CORPUS[request.param]


@pytest.fixture(params=sorted(SMALL), ids=str)
def small_sg(request):
    return SMALL[request.param]


@pytest.fixture(params=sorted(k for k, S in CORPUS.items() if S.is_distributive), ids=str)
def dist_sg(request):
    return CORPUS[request.param]


@pytest.fixture
def ch3():
    return generate("chain:3")


@pytest.fixture
def b2():
    return generate("brandt:2")


@pytest.fixture
def ba4():
    return generate("boolean:2")


@pytest.fixture
def i2():
    return generate("sym_inv:2")
