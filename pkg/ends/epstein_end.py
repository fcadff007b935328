"""
Epstein End Module
End metrics g_t from data at infinity, Beltrami coefficients and the
chart-level Hodge star on conformally compact ends
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from ends.schwarzian import ConformalMetric
from geometry.sl2_kinematics import Sl2Matrix
from utils.errors import ConvexityError, DegenerateSurfaceError, DomainError
from utils.quadrature import Rectangle


@dataclass(frozen=True)
class EndFrame:
    """
    Data at infinity of an end on a rectangular chart

    The endomorphism B-hat is carried as the pair (b_z, b_zbar) with
    B-hat(v) = b_z v + b_zbar conj(v). Evaluators accept scalars and arrays.
    """
    metric: ConformalMetric
    b_z: Callable
    b_zbar: Callable
    domain: Rectangle

    @classmethod
    def fuchsian(cls, rho: float, domain: Rectangle) -> "EndFrame":
        zero = lambda z: 0.0 * np.asarray(z, dtype=complex)
        return cls(ConformalMetric.constant(rho, domain), zero, zero, domain)

    def shape_matrix(self, z: complex) -> np.ndarray:
        """B-hat at z as a real 2x2 matrix."""
        return real_matrix_from_frame(complex(self.b_z(z)), complex(self.b_zbar(z)))


@dataclass(frozen=True)
class ChartForm:
    """
    E-valued form p * (c1 e1 + c2 e2 + c3 e3) at one point of an end chart

    For degree 1 the slots are dz, dz-bar, dt; for degree 2 they are
    dz^dt, dz-bar^dt, dz^dz-bar.
    """
    degree: int
    section: Sl2Matrix
    dz: complex
    dzbar: complex
    dt: complex


@dataclass(frozen=True)
class InfinityData:
    """Pointwise metric tensor and endomorphism, either on a surface or at infinity"""
    metric: np.ndarray
    endomorphism: np.ndarray

    def to_end_frame(self, domain: Rectangle, tol: float = 1e-10) -> EndFrame:
        """
        Constant EndFrame on `domain` carrying this metric and endomorphism

        Raises:
            DomainError: the metric is not a positive multiple of the identity
        """
        g = np.asarray(self.metric, dtype=float)
        rho = 0.5 * (g[0, 0] + g[1, 1])
        if not rho > 0 or np.max(np.abs(g - rho * np.eye(2))) > tol * rho:
            raise DomainError(f"metric at infinity is not conformal: {g.tolist()}")
        b_z, b_zbar = frame_from_real_matrix(self.endomorphism)
        return EndFrame(
            ConformalMetric.constant(rho, domain),
            lambda z: b_z + 0.0 * np.asarray(z, dtype=complex),
            lambda z: b_zbar + 0.0 * np.asarray(z, dtype=complex),
            domain,
        )


@dataclass(frozen=True)
class AdaptedChart:
    """
    Chart w = k (z - z0) in which the density at w = 0 equals 4

    `matrix` is the SL(2,C) element of the chart change; sections are moved with
    Sl2Matrix.conjugate_by(matrix).
    """
    z0: complex
    scale: float
    matrix: np.ndarray
    density_at_origin: float

    def to_chart(self, z):
        return self.scale * (np.asarray(z) - self.z0)

    def pushforward(self, section: Sl2Matrix) -> Sl2Matrix:
        return section.conjugate_by(self.matrix)


def frame_from_real_matrix(m) -> Tuple[complex, complex]:
    """(L_z, L_zbar) of the real-linear map with matrix [[p, q], [r, s]]."""
    m = np.asarray(m, dtype=float)
    p, q, r, s = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    return complex(p + s, r - q) / 2.0, complex(p - s, r + q) / 2.0


def real_matrix_from_frame(l_z: complex, l_zbar: complex) -> np.ndarray:
    """Real 2x2 matrix of v -> l_z v + l_zbar conj(v)."""
    image_1 = l_z + l_zbar
    image_i = 1j * (l_z - l_zbar)
    return np.array([[image_1.real, image_i.real], [image_1.imag, image_i.imag]])


def shape_to_infinity(metric, shape) -> InfinityData:
    """
    Data at infinity of a convex surface: g-hat = (Id + B)* g, B-hat = (Id + B)^-1 (Id - B)

    Args:
        metric: 2x2 symmetric positive-definite metric tensor g
        shape: 2x2 real shape operator B

    Raises:
        ConvexityError: B has a negative (or non-real) eigenvalue
    """
    g = np.asarray(metric, dtype=float)
    b = np.asarray(shape, dtype=float)
    eigenvalues = np.linalg.eigvals(b)
    if np.any(np.abs(eigenvalues.imag) > 1e-12) or np.any(eigenvalues.real < -1e-12):
        raise ConvexityError(f"shape operator must have nonnegative eigenvalues, got {eigenvalues}")
    identity = np.eye(2)
    a0 = identity + b
    g_hat = a0.T @ g @ a0
    b_hat = np.linalg.solve(a0, identity - b)
    return InfinityData(metric=g_hat, endomorphism=b_hat)


def shape_to_end_frame(metric, shape, domain: Rectangle) -> EndFrame:
    """shape_to_infinity for constant data, packaged as an EndFrame on `domain`."""
    return shape_to_infinity(metric, shape).to_end_frame(domain)


def infinity_to_shape(metric_hat, endomorphism_hat) -> InfinityData:
    """Inverse of shape_to_infinity: B = (Id + B-hat)^-1 (Id - B-hat), g = (Id + B)^-* g-hat."""
    g_hat = np.asarray(metric_hat, dtype=float)
    b_hat = np.asarray(endomorphism_hat, dtype=float)
    identity = np.eye(2)
    if abs(np.linalg.det(identity + b_hat)) < 1e-14:
        raise DegenerateSurfaceError("Id + B-hat is singular (eigenvalue -1)")
    b = np.linalg.solve(identity + b_hat, identity - b_hat)
    a0_inv = np.linalg.inv(identity + b)
    return InfinityData(metric=a0_inv.T @ g_hat @ a0_inv, endomorphism=b)


def _check_t(t: float) -> None:
    if not 0 < t <= 1:
        raise DomainError(f"t must lie in (0, 1], got {t}")


def end_metric(frame: EndFrame, t: float) -> Callable[[complex], np.ndarray]:
    """
    g_t = (1/4t^2) (Id + t^2 B-hat)* g-hat as a tensor evaluator z -> 2x2

    The full end metric is g_t x dt^2/t^2.
    """
    _check_t(t)

    def tensor(z: complex) -> np.ndarray:
        a = np.eye(2) + t * t * frame.shape_matrix(z)
        if np.linalg.det(a) <= 1e-14:
            raise DegenerateSurfaceError(f"Id + t^2 B-hat is singular at z={z}, t={t}")
        rho = float(frame.metric(z))
        return rho / (4.0 * t * t) * (a.T @ a)

    return tensor


def end_volume_density(frame: EndFrame, z: complex, t: float) -> float:
    """Coefficient of the volume form of g_t x dt^2/t^2 against dx^dy^dt."""
    return math.sqrt(np.linalg.det(end_metric(frame, t)(z))) / t


def beltrami_of(a) -> complex:
    """mu = A_zbar / A_z of an orientation-preserving real 2x2 map."""
    a_z, a_zbar = frame_from_real_matrix(a)
    if a_z == 0:
        raise DegenerateSurfaceError("A_z = 0: Beltrami coefficient undefined")
    mu = a_zbar / a_z
    if abs(mu) >= 1:
        raise DomainError(f"map is not orientation preserving: |mu| = {abs(mu):.6f}")
    return mu


def hodge_star_matrix(mu: complex) -> np.ndarray:
    """
    Hodge star of g = A* g_euc on 1-forms, mu the Beltrami coefficient of A

    Row j is the (dz, dz-bar) coefficient vector of the star of the j-th basis
    form, so star(alpha_z dz + alpha_zbar dz-bar) = (alpha_z, alpha_zbar) @ H.
    """
    mod2 = abs(mu) ** 2
    if mod2 >= 1:
        raise DomainError(f"|mu| must be < 1, got {math.sqrt(mod2):.6f}")
    prefactor = -1j / (1.0 - mod2)
    return prefactor * np.array(
        [[1.0 + mod2, 2.0 * mu], [-2.0 * np.conj(mu), -1.0 - mod2]], dtype=complex
    )


def mu_t(frame: EndFrame, z, t: float):
    """mu_t = B-hat_zbar / (1 + t^2 B-hat_z)"""
    denominator = 1.0 + t * t * np.asarray(frame.b_z(z), dtype=complex)
    if np.any(denominator == 0):
        raise DegenerateSurfaceError(f"1 + t^2 B-hat_z vanishes at t={t}")
    value = np.asarray(frame.b_zbar(z), dtype=complex) / denominator
    return complex(value) if value.ndim == 0 else value


def beta_coeffs(frame: EndFrame, z, t: float):
    """(beta0, beta1) = (|mu_t|^2, mu_t) / (1 - t^4 |mu_t|^2)"""
    mu = np.asarray(mu_t(frame, z, t))
    denominator = 1.0 - t ** 4 * np.abs(mu) ** 2
    if np.any(denominator <= 0):
        raise DegenerateSurfaceError(f"t^4 |mu_t|^2 >= 1 at t={t}")
    beta0 = np.abs(mu) ** 2 / denominator
    beta1 = mu / denominator
    if beta0.ndim == 0:
        return float(beta0), complex(beta1)
    return beta0, beta1


def dw_norm(frame: EndFrame, z: complex, t: float) -> float:
    """
    |dw_t|_{g_t} = 2t |dz|_g-hat / |1 + t^2 B-hat_z|

    |dz|_g-hat = 1/sqrt(rho) is the operator norm of dz against rho |dz|^2.
    """
    _check_t(t)
    denominator = abs(1.0 + t * t * complex(frame.b_z(z)))
    if denominator == 0:
        raise DegenerateSurfaceError(f"1 + t^2 B-hat_z vanishes at z={z}, t={t}")
    rho = float(frame.metric(z))
    return 2.0 * t / math.sqrt(rho) / denominator


def epstein_threshold(sigma_inf_norm: float) -> float:
    """log sqrt(1 + 2 ||Sigma||_inf): above this depth the Epstein surfaces are convex."""
    if sigma_inf_norm < 0:
        raise DomainError(f"sup norm must be nonnegative, got {sigma_inf_norm}")
    return 0.5 * math.log1p(2.0 * sigma_inf_norm)


def adapted_chart(frame: EndFrame, z0: complex) -> AdaptedChart:
    """Affine chart centered at z0 scaled so that the density at the center is 4."""
    rho = float(frame.metric(z0))
    if not rho > 0:
        raise DomainError(f"metric density must be positive, got {rho}")
    k = math.sqrt(rho) / 2.0
    root = math.sqrt(k)
    matrix = np.array([[root, -root * z0], [0.0, 1.0 / root]], dtype=complex)
    return AdaptedChart(z0=complex(z0), scale=k, matrix=matrix, density_at_origin=rho / k ** 2)


def polynomial_frame(
    bxx: Sequence[Sequence[float]],
    bxy: Sequence[Sequence[float]],
    byy: Sequence[Sequence[float]],
    metric: ConformalMetric,
    domain: Rectangle,
) -> EndFrame:
    """
    Frame whose B-hat is the symmetric matrix field [[bxx, bxy], [bxy, byy]]

    Each entry is a real polynomial in (x, y) given as a coefficient grid
    c[i][j] of x^i y^j.
    """
    cxx = np.atleast_2d(np.asarray(bxx, dtype=float))
    cxy = np.atleast_2d(np.asarray(bxy, dtype=float))
    cyy = np.atleast_2d(np.asarray(byy, dtype=float))

    def entries(z):
        z = np.asarray(z, dtype=complex)
        x, y = z.real, z.imag
        return P.polyval2d(x, y, cxx), P.polyval2d(x, y, cxy), P.polyval2d(x, y, cyy)

    def b_z(z):
        pxx, _, pyy = entries(z)
        return 0.5 * (pxx + pyy) + 0j

    def b_zbar(z):
        pxx, pxy, pyy = entries(z)
        return 0.5 * (pxx - pyy) + 1j * pxy

    return EndFrame(metric=metric, b_z=b_z, b_zbar=b_zbar, domain=domain)


def validate_convex_frame(
    frame: EndFrame,
    samples: int = 5,
    heights: Optional[Sequence[float]] = None,
) -> None:
    """
    Check that Id + t^2 B-hat has positive eigenvalues and |t^2 mu_t| < 1 on a grid

    Raises:
        ConvexityError: the condition fails at some sampled (z, t)
    """
    if heights is None:
        heights = np.linspace(0.1, 1.0, 10)
    for z in frame.domain.grid(samples):
        b = frame.shape_matrix(z)
        for t in heights:
            eigenvalues = np.linalg.eigvals(np.eye(2) + t * t * b)
            if np.any(eigenvalues.real <= 0) or np.any(np.abs(eigenvalues.imag) > 1e-12):
                raise ConvexityError(f"Id + t^2 B-hat not positive at z={z}, t={t}")
            if abs(t * t * mu_t(frame, z, t)) >= 1:
                raise ConvexityError(f"|t^2 mu_t| >= 1 at z={z}, t={t}")
