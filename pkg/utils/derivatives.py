"""
Numerical Derivative Utility Module
Cauchy-integral derivatives for holomorphic evaluators and Ridders
extrapolation for smooth real-variable fields
"""
import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np

from config import CAUCHY_MAX_HALVINGS, CAUCHY_NODES, CAUCHY_RADIUS, RIDDERS_STEP
from utils.errors import DerivativeError

logger = logging.getLogger(__name__)

# Negative Fourier modes above this fraction of the positive ones mean the
# evaluator is not holomorphic on the circle.
HOLOMORPHY_THRESHOLD = 1e-8


def ridders(func: Callable, x: float, h: Optional[float] = None) -> Tuple[complex, float]:
    """
    Derivative of func at x by Ridders' polynomial extrapolation of central differences

    Args:
        func: real-variable function, may return complex or array values
        x: evaluation point
        h: initial step; should be a scale over which func changes noticeably

    Returns:
        (derivative, error estimate)
    """
    if h is None:
        h = RIDDERS_STEP
    if h == 0.0:
        raise ValueError("Ridders step must be nonzero")

    con = 1.4
    con2 = con * con
    safe = 2.0
    ntab = 10

    def nrm(value):
        return float(np.max(np.abs(value)))

    table = [[None] * ntab for _ in range(ntab)]
    hh = h
    table[0][0] = (func(x + hh) - func(x - hh)) / (2.0 * hh)
    err = math.inf
    best = table[0][0]
    for i in range(1, ntab):
        hh /= con
        table[0][i] = (func(x + hh) - func(x - hh)) / (2.0 * hh)
        fac = con2
        for j in range(1, i + 1):
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0)
            fac *= con2
            errt = max(nrm(table[j][i] - table[j - 1][i]), nrm(table[j][i] - table[j - 1][i - 1]))
            if errt <= err:
                err = errt
                best = table[j][i]
        if nrm(table[i][i] - table[i - 1][i - 1]) >= safe * err:
            break
    return best, err


def wirtinger_derivatives(
    field: Callable[[complex], complex],
    z: complex,
    h: Optional[float] = None,
) -> Tuple[complex, complex]:
    """
    Wirtinger derivatives of a smooth (not necessarily holomorphic) field

    Returns:
        (d/dz, d/dzbar) with d/dz = (d/dx - i d/dy)/2 and d/dzbar = (d/dx + i d/dy)/2
    """
    z = complex(z)
    fx, _ = ridders(lambda s: field(z + s), 0.0, h)
    fy, _ = ridders(lambda s: field(z + 1j * s), 0.0, h)
    return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)


def _circle_coefficients(f: Callable, z0: complex, radius: float, nodes: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    points = z0 + radius * np.exp(1j * theta)
    values = np.array([complex(f(p)) for p in points])
    if not np.all(np.isfinite(values)):
        raise FloatingPointError("non-finite sample on the Cauchy circle")
    return np.fft.fft(values) / nodes


def holomorphy_ratio(coefficients: np.ndarray, depth: int = 3) -> float:
    """Largest negative-mode coefficient relative to the largest nonnegative one."""
    nodes = len(coefficients)
    positive = np.abs(coefficients[: depth + 1]).max()
    negative = np.abs(coefficients[nodes - depth:]).max()
    if positive == 0.0:
        return 0.0 if negative == 0.0 else math.inf
    return float(negative / positive)


def cauchy_derivatives(
    f: Callable[[complex], complex],
    z0: complex,
    order: int = 3,
    radius: Optional[float] = None,
    nodes: Optional[int] = None,
    tol: float = 1e-10,
) -> List[complex]:
    """
    Derivatives f(z0), f'(z0), ..., f^(order)(z0) by the trapezoid rule for the Cauchy integral

    The radius is halved until the N- and 2N-node rules agree; a persistent
    negative Fourier mode means f is not holomorphic near z0.

    Args:
        f: evaluator holomorphic on a neighborhood of z0
        z0: expansion point
        order: highest derivative returned
        radius: starting circle radius
        nodes: number of trapezoid nodes (the check uses twice as many)
        tol: agreement tolerance between the two node counts, relative to max(1, |value|)

    Returns:
        List of derivatives indexed by order
    """
    if radius is None:
        radius = CAUCHY_RADIUS
    if nodes is None:
        nodes = CAUCHY_NODES
    z0 = complex(z0)

    last_reason = "no attempt"
    for halving in range(CAUCHY_MAX_HALVINGS + 1):
        r = radius / (2 ** halving)
        try:
            coarse = _circle_coefficients(f, z0, r, nodes)
            fine = _circle_coefficients(f, z0, r, 2 * nodes)
        except (ZeroDivisionError, FloatingPointError, OverflowError) as e:
            last_reason = f"evaluation failed at radius {r:.3g}: {e}"
            continue

        ratio = holomorphy_ratio(fine)
        if ratio > HOLOMORPHY_THRESHOLD:
            last_reason = f"negative Fourier modes at relative size {ratio:.2e}"
            continue

        derivatives = []
        converged = True
        for n in range(order + 1):
            scale = math.factorial(n) / r ** n
            d_coarse = coarse[n] * scale
            d_fine = fine[n] * scale
            if abs(d_fine - d_coarse) > tol * max(1.0, abs(d_fine)):
                converged = False
                last_reason = f"order {n} unstable at radius {r:.3g}"
                break
            derivatives.append(complex(d_fine))
        if converged:
            if halving:
                logger.debug("Cauchy derivatives at %s settled after %d halvings", z0, halving)
            return derivatives

    raise DerivativeError(f"Cauchy derivatives at {z0} failed: {last_reason}")
