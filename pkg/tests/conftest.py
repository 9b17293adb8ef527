import functools

import pytest

from exact_ed.params import solve_params
from exact_ed.reduced import build_reduced_model


@functools.lru_cache(maxsize=None)
def solved(n, c=10):
    return solve_params(n, c)


@functools.lru_cache(maxsize=None)
def model_for(n):
    return build_reduced_model(n, solved(n).r)


@pytest.fixture
def params5():
    return solved(5)
