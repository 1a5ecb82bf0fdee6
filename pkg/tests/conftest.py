"""Shared fixtures: one context per classified family."""

import pytest

from qladder.orthopoly import hermite_data, jacobi_data, laguerre_data
from qladder.propagator import build_context

CANONICAL = {
    "hermite": hermite_data(),
    "laguerre": laguerre_data(2.5),
    "jacobi": jacobi_data(-1.0, 1.0, 2.0, 1.5),
}


@pytest.fixture(scope="session", params=sorted(CANONICAL))
def family_name(request):
    return request.param


@pytest.fixture(scope="session")
def family_ctx(family_name):
    return build_context(CANONICAL[family_name])
