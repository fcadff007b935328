"""
Schwarzian Module
Schwarzian derivatives of locally univalent maps and norms of holomorphic
quadratic differentials against conformal metrics
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import minimize

from config import LINF_GRID, LINF_MAX_REFINEMENTS, LINF_RELATIVE_STOP
from utils.derivatives import cauchy_derivatives, wirtinger_derivatives
from utils.errors import CriticalPointError, DomainError, QuadratureError
from utils.quadrature import Disk, Rectangle, integrate

logger = logging.getLogger(__name__)

Domain = Union[Rectangle, Disk]

NEHARI_BOUND = 1.5


def _poly(coefficients) -> Polynomial:
    return Polynomial(np.asarray(coefficients, dtype=complex))


@dataclass(frozen=True)
class RationalMap:
    """
    P/Q with complex polynomial coefficients (lowest degree first)

    Derivatives and compositions are computed on coefficients, so they are exact
    up to floating-point arithmetic.
    """
    numerator: Polynomial
    denominator: Polynomial = field(default_factory=lambda: _poly([1.0]))

    @classmethod
    def from_coefficients(cls, numerator, denominator=(1.0,)) -> "RationalMap":
        return cls(_poly(numerator), _poly(denominator))

    @classmethod
    def mobius(cls, a: complex, b: complex, c: complex, d: complex) -> "RationalMap":
        """(a z + b) / (c z + d)"""
        if abs(a * d - b * c) == 0:
            raise DomainError("Mobius map needs ad - bc != 0")
        return cls(_poly([b, a]), _poly([d, c]))

    @classmethod
    def koebe(cls) -> "RationalMap":
        """z / (1 - z)^2"""
        return cls(_poly([0.0, 1.0]), _poly([1.0, -2.0, 1.0]))

    @classmethod
    def disk_automorphism(cls, rotation: float, a: complex) -> "RationalMap":
        """e^{i rotation} (z - a) / (1 - conj(a) z)"""
        if abs(a) >= 1:
            raise DomainError(f"disk automorphism needs |a| < 1, got {a}")
        u = complex(math.cos(rotation), math.sin(rotation))
        return cls.mobius(u, -u * a, -np.conj(a), 1.0)

    def __call__(self, z):
        den = self.denominator(z)
        if np.isscalar(den) and den == 0:
            raise ZeroDivisionError(f"pole of the rational map at {z}")
        return self.numerator(z) / den

    def derivative(self) -> "RationalMap":
        p, q = self.numerator, self.denominator
        return RationalMap(p.deriv() * q - p * q.deriv(), q * q)

    def derivatives(self, z: complex, order: int = 3) -> List[complex]:
        values = [complex(self(z))]
        current = self
        for _ in range(order):
            current = current.derivative()
            values.append(complex(current(z)))
        return values

    def compose(self, inner: "RationalMap") -> "RationalMap":
        """self o inner"""
        p, q = inner.numerator, inner.denominator
        degree = max(self.numerator.degree(), self.denominator.degree())
        num = _poly([0.0])
        den = _poly([0.0])
        a = np.pad(self.numerator.coef, (0, degree + 1 - len(self.numerator.coef)))
        b = np.pad(self.denominator.coef, (0, degree + 1 - len(self.denominator.coef)))
        for i in range(degree + 1):
            term = p ** i * q ** (degree - i)
            num = num + a[i] * term
            den = den + b[i] * term
        return RationalMap(num, den)


@dataclass(frozen=True)
class ConformalMetric:
    """
    Conformal metric rho |dz|^2 on a chart

    The density evaluator must accept scalars and numpy arrays.
    """
    density: Callable
    domain: Optional[Domain] = None

    def __call__(self, z):
        return self.density(z)

    def scaled(self, k: float) -> "ConformalMetric":
        if not k > 0:
            raise DomainError(f"metric scale must be positive, got {k}")
        return ConformalMetric(lambda z, rho=self.density: k * rho(z), self.domain)

    @classmethod
    def constant(cls, rho: float, domain: Optional[Domain] = None) -> "ConformalMetric":
        if not rho > 0:
            raise DomainError(f"density must be positive, got {rho}")
        return cls(lambda z: rho + 0.0 * np.real(z), domain)


@dataclass(frozen=True)
class QuadDiff:
    """
    Holomorphic quadratic differential phi dz^2 on a chart

    The evaluator must accept scalars and numpy arrays.
    """
    phi: Callable
    domain: Domain

    def __call__(self, z):
        return self.phi(z)

    @classmethod
    def polynomial(cls, coefficients, domain: Domain) -> "QuadDiff":
        poly = _poly(coefficients)
        return cls(poly, domain)

    def scaled(self, c: complex) -> "QuadDiff":
        return QuadDiff(lambda z, phi=self.phi: c * phi(z), self.domain)

    def holomorphy_residual(self, samples: int = 5) -> float:
        """max |d phi / dzbar| on a sample grid of the domain."""
        residual = 0.0
        for z in self.domain.grid(samples):
            _, dzbar = wirtinger_derivatives(lambda w: complex(self.phi(w)), z)
            residual = max(residual, abs(dzbar))
        return residual


def disk_hyperbolic_metric() -> ConformalMetric:
    """rho(z) = 4 / (1 - |z|^2)^2 on the unit disk."""
    return ConformalMetric(lambda z: 4.0 / (1.0 - np.abs(z) ** 2) ** 2, Disk(0j, 1.0))


def _derivatives(f, z: complex, order: int = 3) -> List[complex]:
    if hasattr(f, "derivatives"):
        return f.derivatives(z, order)
    return cauchy_derivatives(f, z, order)


def schwarzian(f, z: complex) -> complex:
    """
    S(f)(z) = f'''/f' - 3/2 (f''/f')^2

    Args:
        f: RationalMap (exact derivatives) or a holomorphic evaluator
        z: query point

    Raises:
        DerivativeError: the evaluator is not holomorphic near z
        CriticalPointError: f'(z) = 0
    """
    _, d1, d2, d3 = _derivatives(f, z, 3)
    if d1 == 0 or abs(d1) < 1e-300:
        raise CriticalPointError(f"f'(z) = 0 at z = {z}")
    ratio = d2 / d1
    return complex(d3 / d1 - 1.5 * ratio * ratio)


def cocycle_residual(f, g, z: complex) -> float:
    """|S(g o f)(z) - (S(g)(f(z)) f'(z)^2 + S(f)(z))|"""
    if isinstance(f, RationalMap) and isinstance(g, RationalMap):
        composite = g.compose(f)
    else:
        composite = lambda w: g(f(w))
    f_value, f_prime = _derivatives(f, z, 1)
    expected = schwarzian(g, f_value) * f_prime ** 2 + schwarzian(f, z)
    return abs(schwarzian(composite, z) - expected)


def qd_pointwise_norm(quad_diff, metric: ConformalMetric, z: complex) -> float:
    """|phi(z)| / rho(z)"""
    rho = float(metric(z))
    if not rho > 0:
        raise DomainError(f"metric density must be positive, got rho({z}) = {rho}")
    return abs(complex(quad_diff(z))) / rho


def rescale_l2_norm_squared(value: float, k: float) -> float:
    """||Phi||^2 for the metric k g-hat, given ||Phi||^2 for g-hat."""
    if not k > 0:
        raise DomainError(f"metric scale must be positive, got {k}")
    return value / k


def _check_density(metric: ConformalMetric, domain: Domain) -> None:
    rho = np.asarray(metric(domain.grid(9)), dtype=float)
    if np.any(rho <= 0) or not np.all(np.isfinite(rho)):
        raise DomainError("metric density must be positive and finite on the domain")


def _polish_max(func: Callable, z0: complex, domain: Domain) -> float:
    """Local maximization of func starting from a grid maximizer."""
    if isinstance(domain, Rectangle):
        bounds = [(domain.x0, domain.x1), (domain.y0, domain.y1)]
    else:
        c, r = domain.center, domain.radius
        bounds = [(c.real - r, c.real + r), (c.imag - r, c.imag + r)]

    def objective(xy):
        z = complex(xy[0], xy[1])
        if not domain.contains(z):
            return 0.0
        return -float(func(z))

    result = minimize(objective, x0=[z0.real, z0.imag], method="L-BFGS-B", bounds=bounds)
    return max(float(func(z0)), -float(result.fun))


def qd_lp_norm(
    quad_diff,
    metric: ConformalMetric,
    p: float = 2,
    domain: Optional[Domain] = None,
    tol: Optional[float] = None,
) -> float:
    """
    L^p norm of |phi|/rho against dA_g-hat = rho dA_euc, p in {2, inf}

    p = 2 integrates |phi|^2 / rho with order-doubling Gauss-Legendre; p = inf
    refines a sample grid (plus local polishing) until the maximum moves by less
    than the configured relative amount. The sup is a heuristic certificate.

    Raises:
        QuadratureError: no convergence within the refinement budget
    """
    if domain is None:
        domain = quad_diff.domain
    _check_density(metric, domain)

    if p == 2:
        value, _ = integrate(
            lambda z: np.abs(quad_diff(z)) ** 2 / metric(z), domain, tol=tol
        )
        return math.sqrt(max(value, 0.0))

    if p != math.inf:
        raise DomainError(f"p must be 2 or inf, got {p}")

    def pointwise(z):
        return np.abs(quad_diff(z)) / metric(z)

    n = LINF_GRID
    previous = None
    for _ in range(LINF_MAX_REFINEMENTS + 1):
        points = domain.grid(n)
        values = np.asarray(pointwise(points), dtype=float)
        best = int(np.argmax(values))
        current = _polish_max(pointwise, complex(points[best]), domain)
        if previous is not None:
            change = abs(current - previous)
            if change <= LINF_RELATIVE_STOP * max(abs(current), 1e-300) or change == 0.0:
                return current
        previous = current
        n = 2 * n - 1
    raise QuadratureError(f"sup norm did not settle after {LINF_MAX_REFINEMENTS} refinements")


def nehari_sup(f, samples: Iterable[complex]) -> float:
    """sup over samples of |S(f)(z)| (1 - |z|^2)^2 / 4"""
    best = 0.0
    for z in samples:
        best = max(best, abs(schwarzian(f, z)) * (1.0 - abs(z) ** 2) ** 2 / 4.0)
    return best
