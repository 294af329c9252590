"""
Shared fixtures for the Toeplitz framework tests.
"""

import os
import sys

import pytest

# Add the project root to the path so we can import the package
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from toeplitz_framework.observability.metrics import get_metrics_collector
from toeplitz_framework.symbols import constant_symbol, make_family, rational_symbol
from toeplitz_framework.szego import BorderSpec

BORDER_ONE = {"a0": 1.0, "a0_hat": 0.4, "poles": [2.0, 0.5], "b": [0.5, 0.2], "b_hat": [0.3, -0.1]}
BORDER_TWO = {"a1": 0.7, "b0": 0.2, "a1_hat": 0.3, "poles": [-3.0], "b": [0.1], "b_hat": [0.6]}


@pytest.fixture(scope="session")
def exp_phi():
    """exp(0.3 (z + 1/z)): G = 1, E = exp(0.09)."""
    return make_family("exp", {"t": 0.3})


@pytest.fixture(scope="session")
def one():
    return constant_symbol(1.0)


@pytest.fixture(scope="session")
def tridiagonal_phi():
    """1.25 - (z + 1/z)/2 = (1 - z/2)(1 - 1/(2z)): G = 1, E = 4/3."""
    return rational_symbol(1.25, -0.5, -0.5, name="tridiagonal")


@pytest.fixture(scope="session")
def border_one():
    return BorderSpec.from_params(BORDER_ONE)


@pytest.fixture(scope="session")
def border_two():
    return BorderSpec.from_params(BORDER_TWO)


@pytest.fixture(scope="session")
def rational_frames():
    return (
        rational_symbol(poles=[(2.0, 1.0)], name="psi"),
        rational_symbol(poles=[(3.0, 0.5)], name="eta"),
    )


@pytest.fixture(autouse=True)
def fresh_metrics():
    get_metrics_collector().clear_metrics()
    yield
