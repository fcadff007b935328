"""
Quadrature Utility Module
Tensor-product Gauss-Legendre rules with order-doubling error estimates
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import roots_legendre

from config import GAUSS_LEGENDRE_ORDER, QUAD_MAX_DOUBLINGS, QUAD_TOLERANCE
from utils.errors import DomainError, QuadratureError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned chart domain [x0, x1] x [y0, y1]"""
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise DomainError(f"empty rectangle {self}")

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def contains(self, z: complex) -> bool:
        return self.x0 <= z.real <= self.x1 and self.y0 <= z.imag <= self.y1

    def grid(self, n: int) -> np.ndarray:
        """Uniform n x n grid of complex points including the boundary."""
        xs = np.linspace(self.x0, self.x1, n)
        ys = np.linspace(self.y0, self.y1, n)
        xx, yy = np.meshgrid(xs, ys, indexing="ij")
        return (xx + 1j * yy).ravel()


@dataclass(frozen=True)
class Disk:
    """Closed euclidean disk domain"""
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"disk radius must be positive, got {self.radius}")

    @property
    def area(self) -> float:
        return np.pi * self.radius ** 2

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) <= self.radius

    def grid(self, n: int) -> np.ndarray:
        """Uniform square grid restricted to the disk."""
        xs = np.linspace(-self.radius, self.radius, n)
        xx, yy = np.meshgrid(xs, xs, indexing="ij")
        points = (xx + 1j * yy).ravel()
        return self.center + points[np.abs(points) <= self.radius]


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    if order < 2:
        raise ValueError("At least 2 nodes required for Gauss-Legendre quadrature")
    nodes, weights = roots_legendre(order)
    return np.asarray(nodes, dtype=float), np.asarray(weights, dtype=float)


def _rule_1d(a: float, b: float, order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = gauss_legendre(order)
    half = 0.5 * (b - a)
    return a + half * (nodes + 1.0), half * weights


def _estimate(f: Callable, domain, order: int) -> float:
    if isinstance(domain, Rectangle):
        xs, wx = _rule_1d(domain.x0, domain.x1, order)
        ys, wy = _rule_1d(domain.y0, domain.y1, order)
        xx, yy = np.meshgrid(xs, ys, indexing="ij")
        values = np.asarray(f(xx + 1j * yy), dtype=float)
        return float(np.einsum("i,ij,j->", wx, values, wy))
    if isinstance(domain, Disk):
        rs, wr = _rule_1d(0.0, domain.radius, order)
        # periodic direction: trapezoid is spectrally accurate
        n_theta = 2 * order
        thetas = 2.0 * np.pi * np.arange(n_theta) / n_theta
        rr, tt = np.meshgrid(rs, thetas, indexing="ij")
        values = np.asarray(f(domain.center + rr * np.exp(1j * tt)), dtype=float)
        return float(np.einsum("i,ij,i->", wr, values, rs) * 2.0 * np.pi / n_theta)
    if isinstance(domain, tuple) and len(domain) == 2:
        xs, wx = _rule_1d(float(domain[0]), float(domain[1]), order)
        return float(np.dot(wx, np.asarray(f(xs), dtype=float)))
    raise DomainError(f"unsupported quadrature domain {domain!r}")


def integrate(
    f: Callable,
    domain,
    order: Optional[int] = None,
    tol: Optional[float] = None,
) -> Tuple[float, float]:
    """
    Integrate a vectorized integrand with an order-doubling error estimate

    Args:
        f: vectorized integrand; receives complex point arrays for 2-D domains
           and real arrays for an interval (a, b)
        domain: Rectangle, Disk or (a, b) interval
        order: starting number of Gauss-Legendre nodes per direction
        tol: relative tolerance between successive orders

    Returns:
        (value, error estimate)

    Raises:
        QuadratureError: if successive orders keep disagreeing
    """
    if order is None:
        order = GAUSS_LEGENDRE_ORDER
    if tol is None:
        tol = QUAD_TOLERANCE

    previous = _estimate(f, domain, order)
    error = float("inf")
    for _ in range(QUAD_MAX_DOUBLINGS):
        order *= 2
        current = _estimate(f, domain, order)
        error = abs(current - previous)
        if error <= tol * abs(current) or error == 0.0:
            return current, error
        previous = current

    raise QuadratureError(
        f"quadrature did not converge: order {order} differs by {error:.3e} "
        f"(tolerance {tol:.1e} relative)"
    )
