import numpy as np
import pytest

from hkcheck.forms import FiberModel
from hkcheck.kahler import kahler_data
from hkcheck.scalars import ExactBackend, FloatBackend

_MODELS = {}


def model(n: int, backend: str = "exact", fault: bool = False) -> FiberModel:
    key = (n, backend, fault)
    if key not in _MODELS:
        bk = ExactBackend() if backend == "exact" else FloatBackend(1e-9)
        _MODELS[key] = FiberModel(n, bk, fault_inject=fault)
    return _MODELS[key]


@pytest.fixture(params=[1, 2, 3], ids=lambda n: f"n{n}")
def exact_model(request):
    return model(request.param)


@pytest.fixture(params=[1, 2], ids=lambda n: f"n{n}")
def small_model(request):
    return model(request.param)


@pytest.fixture(params=["exact", "float"])
def model2(request):
    return model(2, request.param)


@pytest.fixture
def kd2():
    return kahler_data(model(2))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
