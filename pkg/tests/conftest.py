import numpy as np
import pytest

from islandde import _backend
from islandde.core import Bounds, Problem
from islandde.problems import make_problem

BACKENDS = [pytest.param(k, id=name) for name, k in _backend.available().items()]


@pytest.fixture(params=BACKENDS)
def kernels(request):
    return request.param


@pytest.fixture
def rastrigin5():
    return make_problem("rastrigin", 5)


def constant_problem(dim=2):
    return Problem("constant", Bounds.uniform(-1.0, 1.0, dim), lambda x: 1.0)


def make_pop_arrays(n, d, seed=0):
    rng = np.random.default_rng(seed)
    return rng.uniform(-5, 5, (n, d))
