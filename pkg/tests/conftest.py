"""
Shared fixtures: chart domains, quadratic differentials, end frames and laminations
"""
from pathlib import Path

import numpy as np
import pytest

from ends.epstein_end import EndFrame, polynomial_frame
from ends.schwarzian import ConformalMetric, QuadDiff
from geometry.laminations import fence
from utils.quadrature import Rectangle

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

# mild polynomial shape operators, Id + t^2 B-hat stays positive for t <= 1
SHAPES = [
    ([[0.3, 0.2], [0.1, 0.0]], [[0.1]], [[0.5, 0.0], [0.2, 0.0]]),
    ([[0.2]], [[0.0, 0.1], [0.1, 0.0]], [[-0.1, 0.2]]),
    ([[0.0, 0.0], [0.4, 0.0]], [[0.05]], [[0.3]]),
    ([[0.5, 0.1]], [[-0.1]], [[0.1, 0.0], [0.0, 0.0], [0.2, 0.0]]),
    ([[0.1]], [[0.2]], [[0.4]]),
]


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def square() -> Rectangle:
    return Rectangle(-0.5, 0.5, -0.5, 0.5)


@pytest.fixture
def linear_qd(square) -> QuadDiff:
    return QuadDiff.polynomial([1.0, 0.5 - 0.25j], square)


@pytest.fixture
def fuchsian(square) -> EndFrame:
    return EndFrame.fuchsian(4.0, square)


def make_polynomial_frame(index: int, domain: Rectangle) -> EndFrame:
    xx, xy, yy = SHAPES[index]
    return polynomial_frame(xx, xy, yy, ConformalMetric.constant(4.0, domain), domain)


@pytest.fixture(params=range(len(SHAPES)))
def shaped_frame(request, square) -> EndFrame:
    return make_polynomial_frame(request.param, square)


@pytest.fixture
def first_shaped_frame(square) -> EndFrame:
    return make_polynomial_frame(0, square)


@pytest.fixture
def three_fence():
    return fence(3, 0.5)
