import pytest

from ostroquad.funcspace import get_function, get_weight


@pytest.fixture
def unit():
    return get_weight("unit")


@pytest.fixture
def inv_sqrt():
    return get_weight("inv_sqrt")


@pytest.fixture
def fn():
    return get_function
