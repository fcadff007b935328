"""
Tube Trigonometry Module
Packing functions, tube radii around cone axes, wedge injectivity radii and
the bending-length constant
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config import DEFAULT_L0
from utils.errors import DomainError

# Tube radius that every cone axis is assumed to carry
MARGULIS_RADIUS = math.asinh(math.sqrt(2.0))
PRINTED_CAP_CONSTANT = 24.0
# 2 pi^2 coth(asinh sqrt 2); coth(asinh sqrt 2) = sqrt(3/2)
EXACT_CAP_CONSTANT = 2.0 * math.pi ** 2 / math.tanh(MARGULIS_RADIUS)
CONSERVATIVE_CAP_CONSTANT = max(PRINTED_CAP_CONSTANT, EXACT_CAP_CONSTANT)
# sup of f
PACKING_LIMIT = math.acosh(2.0 / math.sqrt(3.0))

ACOSH_SERIES_CUTOFF = 1e-8


@dataclass(frozen=True)
class ConeAxisData:
    """Cone axis with length L_c and cone angle theta_c"""
    length: float
    angle: float = 2.0 * math.pi

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError(f"axis length must be positive, got {self.length}")
        if not 0 < self.angle <= 2.0 * math.pi:
            raise DomainError(f"cone angle must lie in (0, 2pi], got {self.angle}")


@dataclass(frozen=True)
class RadiusBound:
    """Both sides of the sinh r(p) chain"""
    intermediate: float
    final: float
    holds: bool


@dataclass(frozen=True)
class ConstantDiscrepancy:
    printed: float
    exact: float
    conservative: float
    printed_is_conservative: bool
    relative_gap: float


def acosh1p(eps: float) -> float:
    """acosh(1 + eps) without cancellation near eps = 0."""
    if eps < 0:
        raise DomainError(f"acosh1p needs eps >= 0, got {eps}")
    if eps < ACOSH_SERIES_CUTOFF:
        return math.sqrt(2.0 * eps) * (1.0 - eps / 12.0)
    return math.log1p(eps + math.sqrt(eps * (eps + 2.0)))


def f_packing(R: float) -> float:
    """
    f(R) = acosh(2 cosh R / sqrt(1 + 3 cosh^2 R))

    If three half-spaces meet B(x, r) and are disjoint inside B(x, R) then r >= f(R).
    Evaluated as acosh(1 + eps) with eps = sinh^2 R / (s (2 cosh R + s)),
    s = sqrt(1 + 3 cosh^2 R).
    """
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    c = math.cosh(R)
    s = math.sqrt(1.0 + 3.0 * c * c)
    eps = math.sinh(R) ** 2 / (s * (2.0 * c + s))
    return acosh1p(eps)


def packing_triangle_bound(R: float) -> float:
    """
    The same bound from the right triangle with sides r, R and angle pi/3

    sinh l = sinh R sin(pi/3),  cosh r = cosh R / cosh l.
    """
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    sinh_l = math.sinh(R) * math.sin(math.pi / 3.0)
    return math.acosh(math.cosh(R) / math.sqrt(1.0 + sinh_l * sinh_l))


def halfspace_cap_fraction(d: float, R: float) -> float:
    """Fraction of the sphere of radius R about x inside a half-space at distance d from x."""
    if not R > 0 or d < 0 or d > R:
        raise DomainError(f"need 0 <= d <= R and R > 0, got d={d}, R={R}")
    return 0.5 * (1.0 - math.tanh(d) / math.tanh(R))


def third_cap_radius(R: float) -> float:
    """Distance at which a half-space cuts off a third of the sphere of radius R."""
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    return math.atanh(math.tanh(R) / 3.0)


def _check_l0(L0: float) -> None:
    if not 0 < L0 <= 1:
        raise DomainError(f"L0 must lie in (0, 1], got {L0}")


def g_floor(r: float, L0: float, cap_constant: Optional[float] = None) -> float:
    """
    g(r) with sinh g(r) = min(1/sqrt(2 + C L0), sinh(r)/sqrt(2))

    Args:
        r: ball radius r(p)
        L0: length threshold
        cap_constant: C; defaults to the conservative 2 pi^2 coth(asinh sqrt 2)
    """
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    _check_l0(L0)
    if cap_constant is None:
        cap_constant = CONSERVATIVE_CAP_CONSTANT
    cap = 1.0 / math.sqrt(2.0 + cap_constant * L0)
    return math.asinh(min(cap, math.sinh(r) / math.sqrt(2.0)))


def bending_length_constant(L0: float = DEFAULT_L0) -> float:
    """
    2 f(g(f(asinh sqrt 2) / 2))

    The cap in g never binds for L0 <= 1, so the value does not depend on L0.
    """
    r = f_packing(MARGULIS_RADIUS) / 2.0
    return 2.0 * f_packing(g_floor(r, L0))


def ball_arc_length(r: float) -> float:
    """Arcs through a point with embedded ball radius r shorter than 2 f(r) bend by less than 2 pi."""
    return 2.0 * f_packing(r)


def margulis_tube_radius(axis: ConeAxisData) -> float:
    """R_c solving theta_c L_c sinh(2 R_c) = 1."""
    product = axis.angle * axis.length
    if not product > 0:
        raise DomainError(f"theta * L must be positive, got {product}")
    return 0.5 * math.asinh(1.0 / product)


def wedge_injectivity(d: float, theta: float) -> float:
    """
    Embedded ball radius r(p) at distance d from a cone axis of angle theta

    sinh r = sinh d sin(theta/2) for theta <= pi, and r = d for theta >= pi.
    """
    if not d > 0:
        raise DomainError(f"d must be positive, got {d}")
    if not 0 < theta <= 2.0 * math.pi:
        raise DomainError(f"cone angle must lie in (0, 2pi], got {theta}")
    if theta >= math.pi:
        return d
    return math.asinh(math.sinh(d) * math.sin(theta / 2.0))


def halfspace_embedding_distance(R_c: float, theta_c: float) -> float:
    """
    d_c from sinh l = sinh R_c sin(theta_c/2) and tanh l = sinh d_c tan(theta_c/2)
    """
    if not R_c > 0:
        raise DomainError(f"R_c must be positive, got {R_c}")
    if not 0 < theta_c <= math.pi / 2.0:
        raise DomainError(f"theta_c must lie in (0, pi/2], got {theta_c}")
    sinh_l = math.sinh(R_c) * math.sin(theta_c / 2.0)
    tanh_l = sinh_l / math.sqrt(1.0 + sinh_l * sinh_l)
    return math.asinh(tanh_l / math.tan(theta_c / 2.0))


def sinh_rp_lower_bound(L0: float, R0: float = MARGULIS_RADIUS) -> RadiusBound:
    """
    Lower bounds for sinh r(p) on the half-space side of a short tube

    intermediate = 1/sqrt(2 + 2 pi^2 coth(R0) L0), final = 1/sqrt(2 + 24 L0).
    `holds` records whether intermediate >= final, which fails at R0 = asinh sqrt 2.
    """
    _check_l0(L0)
    exact = 2.0 * math.pi ** 2 / math.tanh(R0)
    intermediate = 1.0 / math.sqrt(2.0 + exact * L0)
    final = 1.0 / math.sqrt(2.0 + PRINTED_CAP_CONSTANT * L0)
    return RadiusBound(intermediate=intermediate, final=final, holds=intermediate >= final)


def constant_discrepancy() -> ConstantDiscrepancy:
    """Compare the printed cap constant 24 with 2 pi^2 coth(asinh sqrt 2)."""
    return ConstantDiscrepancy(
        printed=PRINTED_CAP_CONSTANT,
        exact=EXACT_CAP_CONSTANT,
        conservative=CONSERVATIVE_CAP_CONSTANT,
        printed_is_conservative=PRINTED_CAP_CONSTANT >= EXACT_CAP_CONSTANT,
        relative_gap=(EXACT_CAP_CONSTANT - PRINTED_CAP_CONSTANT) / PRINTED_CAP_CONSTANT,
    )


def _unit_vector(point: Tuple[float, float]) -> np.ndarray:
    theta, height = point
    if not -1.0 <= height <= 1.0:
        raise DomainError(f"height on the unit sphere must lie in [-1, 1], got {height}")
    radial = math.sqrt(max(0.0, 1.0 - height * height))
    return np.array([radial * math.cos(theta), radial * math.sin(theta), height])


def cone_sphere_distance(
    p1: Tuple[float, float],
    p2: Tuple[float, float],
    t: float,
) -> float:
    """
    Distance on the spherical cone-surface S_t of cone angle t

    Points are (theta, z) cylindrical coordinates on the unit sphere, theta taken
    modulo t. The wedge is unwrapped ceil(2pi/t) + 1 times on each side; a minimizing
    path either develops into one copy with angular gap at most t/2 <= pi or passes
    through a pole, and the pole route is never shorter than the gap-pi value.
    """
    if not 0 < t <= 2.0 * math.pi:
        raise DomainError(f"cone angle must lie in (0, 2pi], got {t}")
    u = _unit_vector((0.0, p1[1]))
    copies = math.ceil(2.0 * math.pi / t) + 1
    best = math.pi
    for k in range(-copies, copies + 1):
        gap = abs(p2[0] - p1[0] + k * t)
        gap = min(gap, math.pi)
        v = _unit_vector((gap, p2[1]))
        best = min(best, math.acos(max(-1.0, min(1.0, float(np.dot(u, v))))))
    return best
