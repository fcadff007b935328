"""
sl2(C) Kinematics Module
Infinitesimal isometries of upper half-space: Killing fields, projective
vector fields, bundle norms and the algebraic operator T
"""
import cmath
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from utils.derivatives import ridders
from utils.errors import DomainError

# Real part of i*dz at height t has hyperbolic length sqrt(2) * t
DZ_NORM_FACTOR = math.sqrt(2.0)


@dataclass(frozen=True)
class Sl2Matrix:
    """
    Traceless matrix [[a, b], [c, -a]]

    Only a, b, c are stored, so the trace is zero by construction.
    """
    a: complex = 0j
    b: complex = 0j
    c: complex = 0j

    @classmethod
    def from_matrix(cls, m) -> "Sl2Matrix":
        m = np.asarray(m, dtype=complex)
        scale = max(1.0, float(np.abs(m).max()))
        if abs(m[0, 0] + m[1, 1]) > 1e-12 * scale:
            raise DomainError(f"matrix is not traceless: trace = {m[0, 0] + m[1, 1]}")
        return cls(complex(0.5 * (m[0, 0] - m[1, 1])), complex(m[0, 1]), complex(m[1, 0]))

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, -self.a]], dtype=complex)

    def __add__(self, other: "Sl2Matrix") -> "Sl2Matrix":
        return Sl2Matrix(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: "Sl2Matrix") -> "Sl2Matrix":
        return Sl2Matrix(self.a - other.a, self.b - other.b, self.c - other.c)

    def __mul__(self, scalar: complex) -> "Sl2Matrix":
        return Sl2Matrix(self.a * scalar, self.b * scalar, self.c * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "Sl2Matrix":
        return self * -1

    def conjugate_by(self, g) -> "Sl2Matrix":
        """g m g^-1 for an invertible 2x2 matrix g."""
        g = np.asarray(g, dtype=complex)
        return Sl2Matrix.from_matrix(g @ self.matrix() @ np.linalg.inv(g))

    def max_abs(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c))


@dataclass(frozen=True)
class HalfSpacePoint:
    """Point (z, t) of upper half-space, t > 0"""
    z: complex
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError(f"height must be positive, got t={self.t}")


@dataclass(frozen=True)
class TangentVectorH3:
    """Components in the coordinate basis d/dx, d/dy, d/dt"""
    vx: float
    vy: float
    vt: float

    def as_array(self) -> np.ndarray:
        return np.array([self.vx, self.vy, self.vt])

    def hyperbolic_norm(self, p: HalfSpacePoint) -> float:
        return float(np.linalg.norm(self.as_array())) / p.t


@dataclass(frozen=True)
class AxisFrame:
    """Infinitesimal translations at the axis point (0, t) as sections"""
    t: float
    dx: Sl2Matrix
    dy: Sl2Matrix
    dt: Sl2Matrix
    dz: Sl2Matrix
    dzbar: Sl2Matrix

    @property
    def unit_normal(self) -> Sl2Matrix:
        """Section of the unit normal t d/dt."""
        return self.dt * self.t


@dataclass(frozen=True)
class TDecomposition:
    """T applied to the parabolic section lambda z^2 d/dz on the vertical axis"""
    normal_coeff: complex
    tangent_form_norm: float
    parabolic_norm: float
    normal_part: Sl2Matrix
    dzbar_part: Sl2Matrix
    dt_part: Sl2Matrix


def projective_field(m: Sl2Matrix, z: complex) -> complex:
    """Coefficient of d/dz of the projective vector field of m: 2(-c z^2 + 2 a z + b)."""
    return 2.0 * (-m.c * z * z + 2.0 * m.a * z + m.b)


def exp_sl2(m: Sl2Matrix, s: float = 1.0) -> np.ndarray:
    """
    exp(s m) in closed form

    m^2 = delta * Id with delta = a^2 + bc, so exp(s m) = cosh(x) Id + sinh(x)/x * s m
    with x = s sqrt(delta).
    """
    delta = m.a * m.a + m.b * m.c
    x = s * cmath.sqrt(delta)
    if abs(x) < 1e-8:
        sinhc = 1.0 + x * x / 6.0
    else:
        sinhc = cmath.sinh(x) / x
    return cmath.cosh(x) * np.eye(2, dtype=complex) + sinhc * s * m.matrix()


def mobius_action(g, p: HalfSpacePoint) -> HalfSpacePoint:
    """
    Isometric extension of the Mobius map g to upper half-space

    For g = [[A, B], [C, D]] with det 1:
        z' = ((Az + B) conj(Cz + D) + A conj(C) t^2) / N
        t' = t / N,  N = |Cz + D|^2 + |C|^2 t^2
    """
    g = np.asarray(g, dtype=complex)
    g = g / cmath.sqrt(np.linalg.det(g))
    A, B, C, D = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    z, t = p.z, p.t
    denom = C * z + D
    norm = abs(denom) ** 2 + abs(C) ** 2 * t * t
    z_new = ((A * z + B) * denom.conjugate() + A * C.conjugate() * t * t) / norm
    return HalfSpacePoint(complex(z_new), float(t / norm))


def hyperbolic_distance(p: HalfSpacePoint, q: HalfSpacePoint) -> float:
    """Distance in upper half-space."""
    arg = (abs(p.z - q.z) ** 2 + (p.t - q.t) ** 2) / (2.0 * p.t * q.t)
    # acosh(1 + arg) without cancellation
    return math.log1p(arg + math.sqrt(arg * (arg + 2.0)))


def killing_field(m: Sl2Matrix, p: HalfSpacePoint, h: float = 1e-2) -> TangentVectorH3:
    """
    Killing field of m at p: d/ds at s=0 of exp(s m) applied to p

    Central differences of the exact flow with Ridders extrapolation.
    """
    def flow(s: float) -> np.ndarray:
        q = mobius_action(exp_sl2(m, s), p)
        return np.array([q.z.real, q.z.imag, q.t])

    # step scaled to the size of m so the flow moves p by a bounded amount
    step = h / max(1.0, m.max_abs() * max(1.0, abs(p.z), p.t, 1.0 / p.t))
    velocity, _ = ridders(flow, 0.0, step)
    return TangentVectorH3(float(velocity[0]), float(velocity[1]), float(velocity[2]))


def norm_on_axis(m: Sl2Matrix, t: float) -> float:
    """Squared bundle norm |s|^2 at (0, t): 4|a|^2 + 2|b|^2/t^2 + 2t^2|c|^2."""
    if not t > 0:
        raise DomainError(f"height must be positive, got t={t}")
    return 4.0 * abs(m.a) ** 2 + 2.0 * abs(m.b) ** 2 / t ** 2 + 2.0 * t ** 2 * abs(m.c) ** 2


def bundle_norm_squared(m: Sl2Matrix, p: HalfSpacePoint) -> float:
    """|s(p)|^2 + |(is)(p)|^2 from Killing fields, valid at any point."""
    real_part = killing_field(m, p).hyperbolic_norm(p)
    imaginary_part = killing_field(m * 1j, p).hyperbolic_norm(p)
    return real_part ** 2 + imaginary_part ** 2


def section_norm_from_field(f0: complex, f1: complex, f2: complex, t: float) -> float:
    """
    Squared norm at (0, t) of the section with projective field (f0 + f1 w + f2 w^2) d/dw

    Equals |f0|^2/(2t^2) + |f1|^2/4 + t^2 |f2|^2/2.
    """
    m = Sl2Matrix(a=f1 / 4.0, b=f0 / 2.0, c=-f2 / 2.0)
    return norm_on_axis(m, t)


def bracket(m1: Sl2Matrix, m2: Sl2Matrix) -> Sl2Matrix:
    """Commutator m1 m2 - m2 m1."""
    return Sl2Matrix(
        a=m1.b * m2.c - m2.b * m1.c,
        b=2.0 * (m1.a * m2.b - m2.a * m1.b),
        c=2.0 * (m1.c * m2.a - m2.c * m1.a),
    )


def axis_frame(t: float) -> AxisFrame:
    """
    Infinitesimal translations at (0, t)

    Uses the correspondence (a, b, c) <-> 2(c t^2 dz-bar-hat + a t dt-hat + b dz-hat).
    """
    if not t > 0:
        raise DomainError(f"height must be positive, got t={t}")
    dz = Sl2Matrix(b=0.5)
    dzbar = Sl2Matrix(c=0.5 / (t * t))
    dt = Sl2Matrix(a=0.5 / t)
    return AxisFrame(t=t, dx=dz + dzbar, dy=(dz - dzbar) * 1j, dt=dt, dz=dz, dzbar=dzbar)


def parabolic_section(z: complex) -> Sl2Matrix:
    """The section p(z), whose projective field is (w - z)^2 d/dw."""
    return Sl2Matrix(a=-0.5 * z, b=0.5 * z * z, c=-0.5)


def parabolic_section_dz(z: complex) -> Sl2Matrix:
    """z-derivative of p(z); its projective field is -2(w - z) d/dw."""
    return Sl2Matrix(a=-0.5, b=z, c=0j)


def t_operator_parabolic(lam: complex, p: HalfSpacePoint) -> TDecomposition:
    """
    T applied to the parabolic field lam z^2 d/dz at a point of the vertical axis

    T p = e_n (x) omega + p (x) dt/t with omega = normal_coeff dz, where e_n = t dt-hat
    is the unit normal section. Also reports |omega| and |p| at p, which agree.

    Args:
        lam: coefficient of the parabolic field
        p: point (0, t)

    Returns:
        TDecomposition with the bracket components against dz, dz-bar and dt
    """
    if p.z != 0:
        raise DomainError(f"point must lie on the vertical axis, got z={p.z}")
    t = p.t
    frame = axis_frame(t)
    section = parabolic_section(0j) * lam

    normal_part = bracket(section, frame.dz)
    dzbar_part = bracket(section, frame.dzbar)
    dt_part = bracket(section, frame.dt)

    normal_coeff = normal_part.a / frame.unit_normal.a
    return TDecomposition(
        normal_coeff=complex(normal_coeff),
        tangent_form_norm=abs(normal_coeff) * DZ_NORM_FACTOR * t,
        parabolic_norm=math.sqrt(norm_on_axis(section, t)),
        normal_part=normal_part,
        dzbar_part=dzbar_part,
        dt_part=dt_part,
    )


def elliptic_axis_angle(g) -> Tuple[Tuple[complex, complex], float]:
    """
    Fixed points on the sphere and rotation angle of an elliptic Mobius map

    Returns:
        ((p, q), theta) with theta in [0, pi]; a fixed point at infinity is complex('inf')
    """
    g = np.asarray(g, dtype=complex)
    g = g / cmath.sqrt(np.linalg.det(g))
    A, B, C, D = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    trace = A + D
    if abs(trace.imag) > 1e-9 or abs(trace.real) >= 2.0:
        raise DomainError(f"map is not elliptic: trace = {trace}")
    theta = 2.0 * math.acos(min(1.0, abs(trace.real) / 2.0))

    if abs(C) < 1e-14:
        return (complex("inf"), complex(B / (D - A))), theta
    disc = cmath.sqrt((D - A) ** 2 + 4.0 * B * C)
    p = (A - D + disc) / (2.0 * C)
    q = (A - D - disc) / (2.0 * C)
    return (complex(p), complex(q)), theta
