"""
Model Deformation Module
The model deformation form omega_Phi on an end: its L^2 integrand, end
energies, decay of delta omega_Phi and the limit bound for ||Phi||_2
"""
import logging
import math
import time
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config import (
    DECAY_FIT_RESIDUAL,
    DECAY_SAMPLES,
    GAUSS_LEGENDRE_ORDER,
    QUAD_MAX_DOUBLINGS,
    QUAD_TOLERANCE,
    TIME_QUAD_ORDER,
)
from ends.epstein_end import (
    ChartForm,
    EndFrame,
    adapted_chart,
    beta_coeffs,
    end_metric,
    mu_t,
)
from ends.schwarzian import QuadDiff
from geometry.sl2_kinematics import (
    Sl2Matrix,
    axis_frame,
    bracket,
    norm_on_axis,
    parabolic_section,
)
from utils.derivatives import wirtinger_derivatives
from utils.errors import DegenerateSurfaceError, DomainError, QuadratureError
from utils.quadrature import gauss_legendre

logger = logging.getLogger(__name__)

# |omega_Phi|^2 dV computed from the fiber norm |p|^2 = t^2/2 is this multiple of
# the closed-form integrand.
FIBER_PAIRING_SCALE = 64.0
# Normalization of the end energy that makes the Fuchsian end an equality in
# energy(t) >= 8 t^2 ||Phi||_2^2.
ENERGY_NORMALIZATION = 256.0
LIMIT_CONSTANT = 8.0


@dataclass(frozen=True)
class EndEnergyResult:
    t: float
    energy: float
    error: float
    first_principles_energy: float


@dataclass(frozen=True)
class DecayFit:
    """log-log fit value ~ prefactor * t^exponent over t_range"""
    exponent: float
    prefactor: float
    residual: float
    t_range: Tuple[float, float]
    samples: int

    @property
    def reliable(self) -> bool:
        return self.residual < DECAY_FIT_RESIDUAL


def _correction_factor(mu, t: float):
    m2 = t ** 4 * np.abs(mu) ** 2
    if np.any(m2 >= 1):
        raise DegenerateSurfaceError(f"t^4 |mu_t|^2 >= 1 at t={t}")
    return 1.0 + 2.0 * m2 / (1.0 - m2)


def omega_phi_integrand(quad_diff: QuadDiff, frame: EndFrame, z, t: float):
    """
    Density of omega_Phi ^ star(omega_Phi^#) against dA_g-hat ^ dt/t

    (t^2/16) ||Phi(z)||^2 (1 + 2 t^4 |mu_t|^2 / (1 - t^4 |mu_t|^2))
    """
    rho = np.asarray(frame.metric(z), dtype=float)
    norm_sq = np.abs(np.asarray(quad_diff(z), dtype=complex)) ** 2 / rho ** 2
    value = t * t / 16.0 * norm_sq * _correction_factor(mu_t(frame, z, t), t)
    return float(value) if np.ndim(value) == 0 else value


def _hodge_star_1form(metric: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """
    Hodge star of a 1-form in three dimensions

    Returns the 2-form components as [beta_12, beta_13, beta_23].
    """
    inverse = np.linalg.inv(metric)
    raised = inverse @ alpha
    volume = math.sqrt(np.linalg.det(metric))
    # star dx^i = volume * g^{il} eps_{ljk} dx^j ^ dx^k (j < k)
    return volume * np.array([raised[2], -raised[1], raised[0]])


def _wedge_1_2(alpha: np.ndarray, beta: np.ndarray) -> complex:
    """Coefficient of dx^dy^dt in alpha ^ beta for beta = [b12, b13, b23]."""
    return alpha[0] * beta[2] - alpha[1] * beta[1] + alpha[2] * beta[0]


def _end_metric_3d(frame: EndFrame, z: complex, t: float) -> np.ndarray:
    metric = np.zeros((3, 3))
    metric[:2, :2] = end_metric(frame, t)(z)
    metric[2, 2] = 1.0 / (t * t)
    return metric


def wedge_density(quad_diff: QuadDiff, frame: EndFrame, z: complex, t: float) -> float:
    """
    |omega_Phi|^2 dV against dA_g-hat ^ dt/t from first principles

    The fiber norm of p(z) is read off in the chart adapted to z, where the end
    point (z, t) sits at (0, t); dz ^ star(dz-bar) uses a numerical Hodge star of
    the three-dimensional metric g_t x dt^2/t^2.
    """
    chart = adapted_chart(frame, z)
    fiber_sq = norm_on_axis(chart.pushforward(parabolic_section(z)), t)
    metric = _end_metric_3d(frame, z, t)
    dz = np.array([1.0, 1j, 0.0])
    wedge = _wedge_1_2(dz, _hodge_star_1form(metric, np.conj(dz)))
    phi = complex(quad_diff(z))
    rho = float(frame.metric(z))
    # against dA_g-hat ^ dt/t = (rho / t) dx^dy^dt
    return float((abs(phi) ** 2 * fiber_sq * wedge).real * t / rho)


def _end_integral(integrand, frame: EndFrame, t: float, order: int, time_order: int) -> float:
    """
    Integral over chart x (0, t] of integrand(z, s) dA_euc ds/s

    Uses u = s^2, so ds/s = du / (2u) and the s^2 behaviour of the integrand
    becomes a regular polynomial in u.
    """
    domain = frame.domain
    xs, wx = gauss_legendre(order)
    us, wu = gauss_legendre(time_order)
    hx = 0.5 * (domain.x1 - domain.x0)
    hy = 0.5 * (domain.y1 - domain.y0)
    x = domain.x0 + hx * (xs + 1.0)
    y = domain.y0 + hy * (xs + 1.0)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    z = xx + 1j * yy
    weights = np.outer(wx, wx) * hx * hy

    half = 0.5 * t * t
    total = 0.0
    for u_node, u_weight in zip(half * (us + 1.0), half * wu):
        s = math.sqrt(u_node)
        values = np.asarray(integrand(z, s), dtype=float)
        total += u_weight / (2.0 * u_node) * float(np.sum(weights * values))
    return total


def end_energy(
    quad_diff: QuadDiff,
    frame: EndFrame,
    t: float,
    order: Optional[int] = None,
    tol: Optional[float] = None,
) -> EndEnergyResult:
    """
    ||omega_Phi||_t^2: the model form's energy over chart x (0, t]

    Normalized so that a Fuchsian end gives exactly 8 t^2 ||Phi||_2^2.

    Raises:
        QuadratureError: order doubling keeps disagreeing
    """
    if not 0 < t <= 1:
        raise DomainError(f"t must lie in (0, 1], got {t}")
    if order is None:
        order = GAUSS_LEGENDRE_ORDER
    if tol is None:
        tol = QUAD_TOLERANCE
    time_order = TIME_QUAD_ORDER // 2

    def density(z, s):
        # integrand against dA_g-hat = rho dA_euc
        return omega_phi_integrand(quad_diff, frame, z, s) * np.asarray(frame.metric(z), dtype=float)

    started = time.time()
    error = math.inf
    previous = _end_integral(density, frame, t, order, time_order)
    for _ in range(QUAD_MAX_DOUBLINGS):
        order *= 2
        time_order *= 2
        current = _end_integral(density, frame, t, order, time_order)
        error = abs(current - previous)
        if error <= tol * abs(current) or error == 0.0:
            logger.debug("[Performance] end energy at t=%.3g took %.2fs", t, time.time() - started)
            energy = ENERGY_NORMALIZATION * current
            return EndEnergyResult(
                t=t,
                energy=energy,
                error=ENERGY_NORMALIZATION * error,
                first_principles_energy=energy * FIBER_PAIRING_SCALE / ENERGY_NORMALIZATION,
            )
        previous = current
    raise QuadratureError(f"end energy at t={t} did not converge (last change {error:.3e})")


def star_omega_phi(quad_diff: QuadDiff, frame: EndFrame, z: complex, t: float) -> ChartForm:
    """
    star omega_Phi = -i phi p dz^dt/t - 2i t^2 phi p (t^2 beta0 dz + beta1 dz-bar)^dt/t
    """
    beta0, beta1 = beta_coeffs(frame, z, t)
    phi = complex(quad_diff(z))
    return ChartForm(
        degree=2,
        section=parabolic_section(z),
        dz=-1j * phi * (1.0 + 2.0 * t ** 4 * beta0) / t,
        dzbar=-2j * t * phi * beta1,
        dt=0j,
    )


def _adapted_parabolic(scale: float) -> Tuple[Sl2Matrix, Sl2Matrix]:
    """p(z) and p_z(z) moved to the chart w = scale (z' - z)."""
    return Sl2Matrix(c=-0.5 / scale), Sl2Matrix(a=-0.5)


def delta_omega_norm(quad_diff: QuadDiff, frame: EndFrame, z: complex, t: float) -> float:
    """
    Pointwise |delta omega_Phi| = |(d - 2T) star omega_Phi|

    Both terms are multiples of dz^dz-bar^dt. The exterior derivative uses
    Wirtinger derivatives of phi*beta0 and phi*beta1 in the chart's flat
    trivialization; T brackets p with the translations along the end coordinate
    vectors, which the chart adapted to z carries to (k (Id + t^2 B-hat) e_j, e_t) at (0, t).
    """
    z = complex(z)
    chart = adapted_chart(frame, z)
    k = chart.scale
    section, section_dz = _adapted_parabolic(k)

    beta0, beta1 = beta_coeffs(frame, z, t)
    phi = complex(quad_diff(z))

    def phi_beta(index):
        def field(w):
            b0, b1 = beta_coeffs(frame, w, t)
            return complex(quad_diff(w)) * (b0 if index == 0 else b1)
        return field

    d_phi_beta1, _ = wirtinger_derivatives(phi_beta(1), z)
    _, dbar_phi_beta0 = wirtinger_derivatives(phi_beta(0), z)

    # d(star omega) = [d_z(phi c2 p) - d_zbar(phi c1 p)] dz^dz-bar^dt
    exterior = (
        (section * d_phi_beta1 + section_dz * (phi * beta1)) * (-2j * t)
        + section * (2j * t ** 3 * dbar_phi_beta0)
    )

    c1 = -1j * (1.0 + 2.0 * t ** 4 * beta0) / t
    c2 = -2j * t * beta1
    frame_t = axis_frame(t)
    a = np.eye(2) + t * t * frame.shape_matrix(z)
    e_x = (frame_t.dx * a[0, 0] + frame_t.dy * a[1, 0]) * k
    e_y = (frame_t.dx * a[0, 1] + frame_t.dy * a[1, 1]) * k
    e_z = (e_x - e_y * 1j) * 0.5
    e_zbar = (e_x + e_y * 1j) * 0.5
    algebraic = (bracket(section, e_z) * c2 - bracket(section, e_zbar) * c1) * phi

    total = exterior - algebraic * 2.0
    # |dz ^ dz-bar ^ dt| = 2 |dx ^ dy ^ dt| = 2 t / sqrt(det g_t)
    volume_xy = math.sqrt(np.linalg.det(end_metric(frame, t)(z)))
    return math.sqrt(norm_on_axis(total, t)) * 2.0 * t / volume_xy


def _fit(ts: np.ndarray, values: np.ndarray) -> DecayFit:
    t_range = (float(ts.min()), float(ts.max()))
    mask = values > 0
    if mask.sum() < 2:
        return DecayFit(math.inf, 0.0, 0.0, t_range, len(ts))
    log_t = np.log(ts[mask])
    log_v = np.log(values[mask])
    slope, intercept = np.polyfit(log_t, log_v, 1)
    residual = float(np.sqrt(np.mean((log_v - (slope * log_t + intercept)) ** 2)))
    fit = DecayFit(float(slope), float(math.exp(intercept)), residual, t_range, len(ts))
    if not fit.reliable:
        logger.warning("decay fit residual %.3f above %.3f", residual, DECAY_FIT_RESIDUAL)
    return fit


def _sample_heights(t_range: Tuple[float, float], samples: Optional[int]) -> np.ndarray:
    if samples is None:
        samples = DECAY_SAMPLES
    t_min, t_max = t_range
    if not 0 < t_min < t_max <= 0.5:
        raise DomainError(f"t-range must lie in (0, 0.5], got {t_range}")
    if samples < 8:
        raise DomainError(f"decay fits need at least 8 samples, got {samples}")
    return np.geomspace(t_min, t_max, samples)


def delta_omega_decay(
    quad_diff: QuadDiff,
    frame: EndFrame,
    z: complex,
    t_range: Tuple[float, float] = (0.01, 0.1),
    samples: Optional[int] = None,
) -> DecayFit:
    """Log-log fit of |delta omega_Phi|(z, t) over logarithmically spaced heights."""
    ts = _sample_heights(t_range, samples)
    values = np.array([delta_omega_norm(quad_diff, frame, z, t) for t in ts])
    return _fit(ts, values)


def delta_omega_energy(
    quad_diff: QuadDiff,
    frame: EndFrame,
    t: float,
    order: int = 6,
    time_order: int = 8,
) -> float:
    """||delta omega_Phi||_t^2 = integral over chart x (0, t] of |delta omega_Phi|^2 dV."""
    if not 0 < t <= 1:
        raise DomainError(f"t must lie in (0, 1], got {t}")
    domain = frame.domain
    xs, wx = gauss_legendre(order)
    ss, ws = gauss_legendre(time_order)
    hx = 0.5 * (domain.x1 - domain.x0)
    hy = 0.5 * (domain.y1 - domain.y0)
    total = 0.0
    for s_node, s_weight in zip(0.5 * t * (ss + 1.0), 0.5 * t * ws):
        for x_node, x_weight in zip(domain.x0 + hx * (xs + 1.0), hx * wx):
            for y_node, y_weight in zip(domain.y0 + hy * (xs + 1.0), hy * wx):
                z = complex(x_node, y_node)
                norm = delta_omega_norm(quad_diff, frame, z, s_node)
                volume = math.sqrt(np.linalg.det(end_metric(frame, s_node)(z))) / s_node
                total += s_weight * x_weight * y_weight * norm * norm * volume
    return total


def delta_omega_energy_decay(
    quad_diff: QuadDiff,
    frame: EndFrame,
    t_range: Tuple[float, float] = (0.02, 0.2),
    samples: Optional[int] = None,
) -> DecayFit:
    """Log-log fit of ||delta omega_Phi||_t^2 over logarithmically spaced t."""
    ts = _sample_heights(t_range, samples)
    values = np.array([delta_omega_energy(quad_diff, frame, t) for t in ts])
    return _fit(ts, values)


def hodge_limit_bound(omega_energy_t0: float, t0: float) -> float:
    """||Phi||_2^2 <= ||omega||_{t0}^2 / (8 t0^2)"""
    if not 0 < t0 <= 1:
        raise DomainError(f"t0 must lie in (0, 1], got {t0}")
    if omega_energy_t0 < 0:
        raise DomainError(f"energy must be nonnegative, got {omega_energy_t0}")
    return omega_energy_t0 / (LIMIT_CONSTANT * t0 * t0)
