"""
Bound Reports Module
Drilling-bound constant pipeline: cone data in, validated report out
"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from config import DEFAULT_L0, PACKAGE_VERSION, QUAD_TOLERANCE, SMOOTH_NEHARI_K
from ends.epstein_end import EndFrame, polynomial_frame, validate_convex_frame
from ends.model_deformation import hodge_limit_bound
from ends.schwarzian import ConformalMetric, QuadDiff, rescale_l2_norm_squared
from geometry.tube_trig import (
    MARGULIS_RADIUS,
    ConeAxisData,
    constant_discrepancy,
    margulis_tube_radius,
)
from utils.errors import DomainError
from utils.quadrature import Rectangle, integrate

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
HODGE_CAP_FACTOR = 3.0 / 14.0
REFERENCE_BANNER = (
    "SMOOTH-CASE REFERENCE ONLY: K = 3/2 is the Nehari constant for smooth "
    "projective structures and is not a rigorous constant for cone manifolds"
)


class ConeComponent(BaseModel):
    """One cone axis: its length at cone angle 2pi and its cone angle"""
    length: float = Field(..., gt=0, description="length L_c at full cone angle")
    angle: float = Field(TWO_PI, gt=0, le=TWO_PI, description="cone angle theta_c in radians")


class ConeLocusSpec(BaseModel):
    """Numeric input of the drilling pipeline"""
    components: List[ConeComponent] = Field(default_factory=list)
    K: float = Field(..., gt=0, description="Nehari-type constant for the cone setting")
    L0: float = Field(DEFAULT_L0, gt=0, lt=1, description="length threshold")
    reference_K: bool = Field(False, description="K was inserted as the smooth-case reference")

    @model_validator(mode="after")
    def check_reference(self) -> "ConeLocusSpec":
        if self.reference_K and self.K != SMOOTH_NEHARI_K:
            raise ValueError(f"reference_K requires K = {SMOOTH_NEHARI_K}")
        return self

    @property
    def total_length(self) -> float:
        return float(sum(c.length for c in self.components))


class ComponentCheck(BaseModel):
    length: float
    angle: float
    tube_radius: float
    length_ok: bool
    radius_ok: bool


class ReportFlags(BaseModel):
    length_threshold: bool
    tube_radius: bool
    tube_disjointness: str = "assumed"
    constant_discrepancy: Dict[str, float]
    printed_constant_is_conservative: bool


class PipelineChain(BaseModel):
    """Intermediate values of the bound, in pipeline order"""
    energy_cap: float
    limit_height: float
    limit_bound_squared: float
    rescaled_squared: float
    per_angle_norm: float
    integrated_bound: float


class Provenance(BaseModel):
    inputs: Dict[str, Any]
    version: str
    tolerances: Dict[str, float]
    precision: str = "float64; extended-precision oracle in the test suite"


class BoundReport(BaseModel):
    eta: float
    c_drill: float
    final_bound: float
    total_length: float
    hodge_energy_cap: float
    tube_radii: List[float]
    components: List[ComponentCheck]
    flags: ReportFlags
    chain: PipelineChain
    banner: Optional[str] = None
    provenance: Provenance

    @property
    def hypotheses_hold(self) -> bool:
        return self.flags.length_threshold and self.flags.tube_radius


def eta() -> float:
    """e^{-asinh sqrt 2} = 1/(sqrt 2 + sqrt 3)"""
    return 1.0 / (math.sqrt(2.0) + math.sqrt(3.0))


def c_drill(K: float) -> float:
    """(1/(4 eta)) sqrt(3 (1 + 2K) / (7 pi))"""
    if not K > 0:
        raise DomainError(f"K must be positive, got {K}")
    return math.sqrt(3.0 * (1.0 + 2.0 * K) / (7.0 * math.pi)) / (4.0 * eta())


def interpolated_length(L_2pi: float, t: float):
    """Bound t L(2 pi) / pi on the length of an axis at cone angle t."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0) or np.any(t_arr > TWO_PI):
        raise DomainError(f"cone angle must lie in (0, 2pi], got {t}")
    value = t_arr * L_2pi / math.pi
    return float(value) if value.ndim == 0 else value


def hodge_energy_cap_at(spec: ConeLocusSpec, t):
    """(3/14) L_C(t) / t"""
    return HODGE_CAP_FACTOR * interpolated_length(spec.total_length, t) / np.asarray(t, dtype=float)


def hodge_energy_cap(spec: ConeLocusSpec) -> float:
    """3 sum(L_c) / (14 pi)"""
    return HODGE_CAP_FACTOR * spec.total_length / math.pi


def _per_angle_norm(spec: ConeLocusSpec, t):
    """||Phi_t||_{g-hat, 2} bound at cone angle t, through the limit bound and metric rescaling."""
    cap = hodge_energy_cap_at(spec, t)
    limit = hodge_limit_bound(1.0, eta()) * cap
    rescaled = rescale_l2_norm_squared(limit, 1.0 / (1.0 + 2.0 * spec.K))
    return np.sqrt(rescaled)


def assemble_report(spec: ConeLocusSpec, tolerance: Optional[float] = None) -> BoundReport:
    """
    Run the pipeline: per-angle energy cap, limit bound at height eta, rescaling
    of the metric by (1 + 2K) and integration of the per-angle norm over [0, 2pi]
    """
    if tolerance is None:
        tolerance = QUAD_TOLERANCE

    h = eta()
    constant = c_drill(spec.K)
    total = spec.total_length
    cap = hodge_energy_cap(spec)

    limit_sq = hodge_limit_bound(cap, h)
    rescaled_sq = rescale_l2_norm_squared(limit_sq, 1.0 / (1.0 + 2.0 * spec.K))
    integrated, _ = integrate(lambda t: _per_angle_norm(spec, t), (0.0, TWO_PI), tol=tolerance)

    checks = []
    for component in spec.components:
        radius = margulis_tube_radius(ConeAxisData(component.length, component.angle))
        checks.append(
            ComponentCheck(
                length=component.length,
                angle=component.angle,
                tube_radius=radius,
                length_ok=component.length <= spec.L0 * component.angle,
                radius_ok=radius >= MARGULIS_RADIUS,
            )
        )

    discrepancy = constant_discrepancy()
    flags = ReportFlags(
        length_threshold=all(c.length_ok for c in checks),
        tube_radius=all(c.radius_ok for c in checks),
        constant_discrepancy={
            "printed": discrepancy.printed,
            "exact": discrepancy.exact,
            "conservative": discrepancy.conservative,
            "relative_gap": discrepancy.relative_gap,
        },
        printed_constant_is_conservative=discrepancy.printed_is_conservative,
    )

    report = BoundReport(
        eta=h,
        c_drill=constant,
        final_bound=TWO_PI * constant * math.sqrt(total),
        total_length=total,
        hodge_energy_cap=cap,
        tube_radii=[c.tube_radius for c in checks],
        components=checks,
        flags=flags,
        chain=PipelineChain(
            energy_cap=cap,
            limit_height=h,
            limit_bound_squared=limit_sq,
            rescaled_squared=rescaled_sq,
            per_angle_norm=math.sqrt(rescaled_sq),
            integrated_bound=integrated,
        ),
        banner=REFERENCE_BANNER if spec.reference_K else None,
        provenance=Provenance(
            inputs=spec.model_dump(),
            version=PACKAGE_VERSION,
            tolerances={"quadrature_relative": tolerance},
        ),
    )
    if not report.hypotheses_hold:
        logger.warning("drilling hypotheses not met; bound reported unverified")
    return report


def load_spec(path: str) -> ConeLocusSpec:
    """
    Load a ConeLocusSpec from JSON

    Raises:
        FileNotFoundError: path does not exist
        pydantic.ValidationError: fields out of range
    """
    spec_path = Path(path)
    if not spec_path.exists():
        raise FileNotFoundError(f"Spec file not found: {path}")
    with open(spec_path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    return ConeLocusSpec.model_validate(payload)


def report_to_json(report: BoundReport) -> str:
    """Deterministic JSON: sorted keys, repr floats, no timestamps."""
    return json.dumps(report.model_dump(), indent=2, sort_keys=True)


class ShapeCoefficients(BaseModel):
    """Real polynomial coefficient grids c[i][j] of x^i y^j for the entries of B-hat"""
    xx: List[List[float]] = Field(default_factory=lambda: [[0.0]])
    xy: List[List[float]] = Field(default_factory=lambda: [[0.0]])
    yy: List[List[float]] = Field(default_factory=lambda: [[0.0]])


class FrameFile(BaseModel):
    """Quadratic differential and end data for end-energy and decay runs"""
    phi: List[List[float]] = Field(..., min_length=1, description="[re, im] coefficients, lowest degree first")
    shape: ShapeCoefficients = Field(default_factory=ShapeCoefficients)
    rho: float = Field(4.0, gt=0, description="constant density of g-hat")
    domain: List[float] = Field([-0.5, 0.5, -0.5, 0.5], min_length=4, max_length=4)

    @model_validator(mode="after")
    def check_coefficients(self) -> "FrameFile":
        for pair in self.phi:
            if len(pair) != 2:
                raise ValueError(f"phi coefficients must be [re, im] pairs, got {pair}")
        return self


def load_frame_file(path: str) -> Tuple[QuadDiff, EndFrame]:
    """
    Build the quadratic differential and a validated convex frame from JSON

    Raises:
        FileNotFoundError: path does not exist
        ConvexityError: Id + t^2 B-hat fails to be positive on the sample grid
    """
    frame_path = Path(path)
    if not frame_path.exists():
        raise FileNotFoundError(f"Frame file not found: {path}")
    with open(frame_path, "r", encoding="utf-8") as f:
        payload = FrameFile.model_validate(json.load(f))

    domain = Rectangle(*payload.domain)
    coefficients = [complex(re, im) for re, im in payload.phi]
    quad_diff = QuadDiff.polynomial(coefficients, domain)
    frame = polynomial_frame(
        payload.shape.xx,
        payload.shape.xy,
        payload.shape.yy,
        ConformalMetric.constant(payload.rho, domain),
        domain,
    )
    validate_convex_frame(frame)
    return quad_diff, frame
