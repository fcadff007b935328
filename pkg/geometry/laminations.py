"""
Laminations Module
Finite measured laminations in the Poincare disk: transverse measures of
geodesic arcs, windowed average bending norms and pleated planes
"""
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from config import (
    EMBEDDING_LEVELS,
    SEARCH_DIRECTIONS,
    SEARCH_OFFSETS,
    SEARCH_POINTS,
    SEARCH_REFINE_TOP,
)
from ends.schwarzian import RationalMap
from geometry.sl2_kinematics import HalfSpacePoint, hyperbolic_distance, mobius_action
from utils.corpus_loader import read_corpus, write_corpus
from utils.errors import ConvexityError, DomainError, LaminationError
from utils.quadrature import Disk

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
# Leaves meeting an arc within this parameter distance of an endpoint do not count
ENDPOINT_TOLERANCE = 1e-10
START_SHIFT = 1e-9
ANGLE_TOLERANCE = 1e-12

DEFAULT_WINDOW = Disk(0j, 0.5)
BENDING_ARC_LENGTH = 2.0 * math.asinh(1.0)

# Embeddedness heuristic: sample step at the coarsest level, domain separation
# below which image pairs are ignored, and the sampled half-length of each line
EMBEDDING_STEP = 0.01
SEPARATION_FLOOR = 0.25
EMBEDDING_HALF_LENGTH = 0.6
EMBEDDING_DIRECTIONS = 16


def _minkowski(x: np.ndarray, y: np.ndarray) -> float:
    return float(x[0] * y[0] - x[1] * y[1] - x[2] * y[2])


def _boundary_vector(angle: float) -> np.ndarray:
    return np.array([1.0, math.cos(angle), math.sin(angle)])


def _disk_to_hyperboloid(z: complex) -> np.ndarray:
    r2 = abs(z) ** 2
    if r2 >= 1.0:
        raise DomainError(f"point must lie in the open unit disk, got {z}")
    return np.array([1.0 + r2, 2.0 * z.real, 2.0 * z.imag]) / (1.0 - r2)


def _hyperboloid_to_disk(x: np.ndarray):
    """Accepts a single vector or an array whose last axis has length 3."""
    x = np.asarray(x)
    return (x[..., 1] + 1j * x[..., 2]) / (1.0 + x[..., 0])


def _normalize_angle(angle: float) -> float:
    return float(angle) % TWO_PI


def _same_angle(a: float, b: float) -> bool:
    gap = abs(_normalize_angle(a) - _normalize_angle(b))
    return min(gap, TWO_PI - gap) < ANGLE_TOLERANCE


def disk_distance(x: complex, y: complex) -> float:
    """Hyperbolic distance in the Poincare disk."""
    x, y = complex(x), complex(y)
    if abs(x) >= 1 or abs(y) >= 1:
        raise DomainError("points must lie in the open unit disk")
    arg = 2.0 * abs(x - y) ** 2 / ((1.0 - abs(x) ** 2) * (1.0 - abs(y) ** 2))
    return math.log1p(arg + math.sqrt(arg * (arg + 2.0)))


@dataclass(frozen=True)
class GeodesicArc:
    """
    Arc x(s), s0 < s < s1, of the geodesic from boundary angle alpha to beta

    x(s) = (e^s w + e^-s u) / sqrt(2 <u, w>) on the hyperboloid, with u, w the
    null vectors (1, cos, sin) of alpha and beta.
    """
    alpha: float
    beta: float
    s0: float
    s1: float

    def __post_init__(self):
        if _same_angle(self.alpha, self.beta):
            raise DomainError("geodesic endpoints must be distinct")
        if not self.s1 > self.s0:
            raise DomainError(f"arc needs s1 > s0, got ({self.s0}, {self.s1})")

    @property
    def length(self) -> float:
        return self.s1 - self.s0

    def frame(self) -> Tuple[np.ndarray, np.ndarray]:
        """(X0, V0) with x(s) = cosh(s) X0 + sinh(s) V0."""
        u = _boundary_vector(self.alpha)
        w = _boundary_vector(self.beta)
        norm = math.sqrt(2.0 * _minkowski(u, w))
        return (w + u) / norm, (w - u) / norm

    def point(self, s: float) -> complex:
        x0, v0 = self.frame()
        return complex(_hyperboloid_to_disk(math.cosh(s) * x0 + math.sinh(s) * v0))

    @classmethod
    def from_frame(cls, x: np.ndarray, v: np.ndarray, start: float, stop: float) -> "GeodesicArc":
        """Arc cosh(s) x + sinh(s) v for start < s < stop, v a unit tangent at x."""
        towards = x + v
        away = x - v
        beta = math.atan2(towards[2], towards[1])
        alpha = math.atan2(away[2], away[1])
        shift = 0.5 * math.log(towards[0] / away[0])
        return cls(_normalize_angle(alpha), _normalize_angle(beta), shift + start, shift + stop)

    @classmethod
    def from_points(cls, p: complex, q: complex) -> "GeodesicArc":
        """The arc from p to q."""
        x = _disk_to_hyperboloid(complex(p))
        y = _disk_to_hyperboloid(complex(q))
        cosh_d = max(1.0, _minkowski(x, y))
        d = math.acosh(cosh_d)
        if d == 0.0:
            raise DomainError("arc endpoints coincide")
        v = (y - cosh_d * x) / math.sinh(d)
        return cls.from_frame(x, v, 0.0, d)

    @classmethod
    def from_direction(cls, x: complex, direction: float, start: float, stop: float) -> "GeodesicArc":
        """Arc through x with euclidean tangent direction `direction`, parametrized from x."""
        frame_x, frame_v = _tangent_frames(np.array([complex(x)]), np.array([direction]))
        return cls.from_frame(frame_x[0], frame_v[0, 0], start, stop)


@dataclass(frozen=True)
class FiniteLamination:
    """
    Disjoint weighted geodesics given by boundary angle pairs

    Leaves may share an ideal endpoint; linked or repeated leaves are rejected.
    """
    leaves: Tuple[Tuple[float, float], ...] = ()
    weights: Tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.leaves) != len(self.weights):
            raise LaminationError("each leaf needs exactly one weight")
        normalized = tuple(
            (_normalize_angle(a), _normalize_angle(b)) for a, b in self.leaves
        )
        object.__setattr__(self, "leaves", normalized)
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        for (a, b), weight in zip(self.leaves, self.weights):
            if _same_angle(a, b):
                raise LaminationError(f"leaf endpoints must be distinct, got ({a}, {b})")
            if not weight > 0:
                raise LaminationError(f"leaf weights must be positive, got {weight}")
        for i in range(len(self.leaves)):
            for j in range(i + 1, len(self.leaves)):
                if _leaves_linked(self.leaves[i], self.leaves[j]):
                    raise LaminationError(f"leaves {i} and {j} intersect")

    def __len__(self) -> int:
        return len(self.leaves)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]]) -> "FiniteLamination":
        rows = list(rows)
        return cls(tuple((r[0], r[1]) for r in rows), tuple(r[2] for r in rows))

    def rows(self) -> List[Tuple[float, float, float]]:
        return [(a, b, w) for (a, b), w in zip(self.leaves, self.weights)]

    def normals(self) -> np.ndarray:
        """
        Euclidean cross products u x w, one row per leaf

        <N, x> = (u x w) . x for the Minkowski normal N, so a point lies on
        the leaf exactly when its dot product with the row vanishes.
        """
        if not self.leaves:
            return np.zeros((0, 3))
        return np.array([np.cross(_boundary_vector(a), _boundary_vector(b)) for a, b in self.leaves])

    @property
    def total_weight(self) -> float:
        return float(sum(self.weights))


def _strictly_between(x: float, a: float, b: float) -> bool:
    """x inside the open counterclockwise arc from a to b."""
    offset = (x - a) % TWO_PI
    return 0.0 < offset < (b - a) % TWO_PI


def _leaves_linked(first: Tuple[float, float], second: Tuple[float, float]) -> bool:
    a, b = first
    c, d = second
    shared = [_same_angle(x, y) for x in (a, b) for y in (c, d)]
    if sum(shared) >= 2:
        # identical leaf
        return True
    if any(shared):
        return False
    return _strictly_between(c, a, b) != _strictly_between(d, a, b)


def load_lamination(path: str) -> FiniteLamination:
    """Load a lamination from a corpus file."""
    return FiniteLamination.from_rows(read_corpus(path))


def dump_lamination(lamination: FiniteLamination, path: str, header: str = "") -> None:
    write_corpus(lamination.rows(), path, header)


def fence(
    count: int = 3,
    spacing: float = 0.5,
    weight: float = 1.0,
    offset: float = 0.0,
    direction: float = 0.0,
    positions: Optional[Sequence[float]] = None,
) -> FiniteLamination:
    """
    Leaves orthogonal to the diameter at angle `direction`

    The leaves meet the diameter at signed hyperbolic distances `positions`
    from the origin, or at `count` points `spacing` apart centered at `offset`.
    """
    if positions is None:
        if count < 0:
            raise DomainError(f"count must be nonnegative, got {count}")
        if count > 1 and not spacing > 0:
            raise DomainError(f"spacing must be positive, got {spacing}")
        positions = [offset + spacing * (j - (count - 1) / 2.0) for j in range(count)]
    leaves = []
    for d in positions:
        half_angle = math.acos(math.tanh(d))
        leaves.append((direction - half_angle, direction + half_angle))
    return FiniteLamination(tuple(leaves), tuple([weight] * len(leaves)))


@dataclass(frozen=True)
class DiskMobius:
    """Disk automorphism z -> e^{i rotation} (z - a) / (1 - conj(a) z)"""
    rotation: float
    a: complex
    transform: RationalMap = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "transform", RationalMap.disk_automorphism(self.rotation, self.a))

    def __call__(self, z):
        return self.transform(z)

    def angle(self, theta: float) -> float:
        image = complex(self.transform(complex(math.cos(theta), math.sin(theta))))
        return _normalize_angle(math.atan2(image.imag, image.real))

    def lamination(self, lamination: FiniteLamination) -> FiniteLamination:
        leaves = tuple((self.angle(a), self.angle(b)) for a, b in lamination.leaves)
        return FiniteLamination(leaves, lamination.weights)

    def arc(self, arc: GeodesicArc) -> GeodesicArc:
        start = complex(self.transform(arc.point(arc.s0)))
        stop = complex(self.transform(arc.point(arc.s1)))
        return GeodesicArc.from_points(start, stop)


def disk_mobius(rotation: float, a: complex) -> DiskMobius:
    return DiskMobius(rotation, complex(a))


def _crossing_parameters(lamination: FiniteLamination, arc: GeodesicArc) -> List[Tuple[float, int]]:
    """(s, leaf index) for each leaf met by the full geodesic of the arc, sorted by s."""
    normals = lamination.normals()
    if len(normals) == 0:
        return []
    x0, v0 = arc.frame()
    c_x = normals @ x0
    c_v = normals @ v0
    scale = np.linalg.norm(normals, axis=1) * max(np.linalg.norm(x0), np.linalg.norm(v0))
    on_leaf = np.hypot(c_x, c_v) <= 1e-12 * scale
    if np.any(on_leaf):
        raise LaminationError(f"arc lies on leaf {int(np.argmax(on_leaf))}")
    crossings = []
    for index, (cx, cv) in enumerate(zip(c_x, c_v)):
        if abs(cx) < abs(cv):
            crossings.append((math.atanh(-cx / cv), index))
    return sorted(crossings)


def crossed_leaves(lamination: FiniteLamination, arc: GeodesicArc) -> List[int]:
    """Indices of leaves crossed by the open arc, in order along it."""
    return [
        index
        for s, index in _crossing_parameters(lamination, arc)
        if arc.s0 + ENDPOINT_TOLERANCE < s < arc.s1 - ENDPOINT_TOLERANCE
    ]


def transverse_measure(lamination: FiniteLamination, arc: GeodesicArc) -> float:
    """
    Total weight of leaves crossed transversally by the open arc

    Raises:
        LaminationError: the arc lies in a leaf
    """
    return float(sum(lamination.weights[i] for i in crossed_leaves(lamination, arc)))


def _tangent_frames(points: np.ndarray, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Hyperboloid points X (P, 3) and unit tangents V (P, D, 3) for disk points
    and euclidean tangent directions
    """
    x = points.real[:, None]
    y = points.imag[:, None]
    r2 = x * x + y * y
    denom = 1.0 - r2
    cos = np.cos(directions)[None, :]
    sin = np.sin(directions)[None, :]
    dr2 = 2.0 * (x * cos + y * sin)
    d_x0 = 2.0 * dr2 / denom ** 2
    d_x1 = 2.0 * cos / denom + 2.0 * x * dr2 / denom ** 2
    d_x2 = 2.0 * sin / denom + 2.0 * y * dr2 / denom ** 2
    # the disk metric is 2|dz|/(1 - |z|^2)
    tangents = np.stack([d_x0, d_x1, d_x2], axis=-1) * (0.5 * denom)[..., None]
    frames = np.stack([1.0 + r2[:, 0], 2.0 * x[:, 0], 2.0 * y[:, 0]], axis=-1) / denom
    return frames, tangents


def _line_values(
    normals: np.ndarray,
    weights: np.ndarray,
    frames: np.ndarray,
    tangents: np.ndarray,
    L: float,
) -> np.ndarray:
    """
    Best measure of an open arc of length L containing the sample point, per line

    The offset is optimized exactly: the best arc starts just before its
    first crossing.
    """
    shape = tangents.shape[:2]
    if len(normals) == 0:
        return np.zeros(shape)
    c_x = frames @ normals.T
    c_v = tangents @ normals.T
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = -c_x[:, None, :] / c_v
    valid = np.abs(ratio) < 1.0
    s = np.where(valid, np.arctanh(np.where(valid, ratio, 0.0)), np.nan)

    starts = np.clip(s - START_SHIFT, -L + START_SHIFT, -START_SHIFT)
    starts = np.where(valid, starts, -START_SHIFT)
    edges = np.broadcast_to(np.array([-L + START_SHIFT, -START_SHIFT]), shape + (2,))
    starts = np.concatenate([starts, edges], axis=-1)

    lower = starts[..., :, None] + ENDPOINT_TOLERANCE
    upper = starts[..., :, None] + L - ENDPOINT_TOLERANCE
    inside = (s[..., None, :] > lower) & (s[..., None, :] < upper)
    return (inside * weights).sum(axis=-1).max(axis=-1)


def _check_window(window: Disk) -> None:
    if abs(window.center) + window.radius >= 1.0:
        raise DomainError("window must be a compact disk inside the unit disk")


def _window_points(window: Disk, count: int) -> np.ndarray:
    n = int(math.ceil(math.sqrt(count * 4.0 / math.pi)))
    if n % 2 == 0:
        n += 1
    return window.grid(max(n, 3))


@dataclass(frozen=True)
class BendingNormEstimate:
    """Windowed sup of the transverse measure with its sampling resolution"""
    value: float
    L: float
    points: int
    directions: int
    refined: int
    best_arc: Optional[GeodesicArc]
    lower_bound: bool = True

    @property
    def disclosure(self) -> str:
        return (
            f"lower bound from {self.points} points x {self.directions} directions, "
            f"offsets optimized exactly, {self.refined} lines refined"
        )


def bending_norm_search(
    lamination: FiniteLamination,
    L: float,
    window: Optional[Disk] = None,
    points: Optional[int] = None,
    directions: Optional[int] = None,
    refine_top: Optional[int] = None,
) -> BendingNormEstimate:
    """
    Sup of transverse_measure over open arcs of length L through sample points of the window

    Coarse grid over (point, direction), exact offsets per line, then a bounded
    scalar refinement of the direction around the best lines. Ties go to the
    lexicographically first (point, direction) cell.
    """
    if not L > 0:
        raise DomainError(f"L must be positive, got {L}")
    if window is None:
        window = DEFAULT_WINDOW
    _check_window(window)
    if points is None:
        points = SEARCH_POINTS
    if directions is None:
        directions = SEARCH_DIRECTIONS
    if refine_top is None:
        refine_top = SEARCH_REFINE_TOP

    started = time.time()
    grid = _window_points(window, points)
    thetas = math.pi * np.arange(directions) / directions
    normals = lamination.normals()
    weights = np.asarray(lamination.weights, dtype=float)

    frames, tangents = _tangent_frames(grid, thetas)
    values = _line_values(normals, weights, frames, tangents, L)

    flat = values.ravel()
    order = np.argsort(-flat, kind="stable")
    best_index = int(order[0])
    best_value = float(flat[best_index])
    best_point, best_theta = divmod(best_index, directions)
    best_line = (complex(grid[best_point]), float(thetas[best_theta]))

    refined = 0
    if len(normals) > 0:
        half_width = math.pi / directions
        for index in order[:refine_top]:
            p_index, t_index = divmod(int(index), directions)
            point = np.array([grid[p_index]])

            def objective(theta, point=point):
                frame, tangent = _tangent_frames(point, np.array([theta]))
                return -float(_line_values(normals, weights, frame, tangent, L)[0, 0])

            center = float(thetas[t_index])
            result = minimize_scalar(
                objective,
                bounds=(center - half_width, center + half_width),
                method="bounded",
                options={"xatol": 1e-6},
            )
            refined += 1
            if -result.fun > best_value:
                best_value = float(-result.fun)
                best_line = (complex(point[0]), float(result.x))

    best_arc = None
    if best_value > 0:
        best_arc = _best_arc_on_line(lamination, best_line[0], best_line[1], L)

    logger.debug("[Performance] bending norm search took %.2fs", time.time() - started)
    return BendingNormEstimate(
        value=best_value,
        L=L,
        points=len(grid),
        directions=directions,
        refined=refined,
        best_arc=best_arc,
    )


def _best_arc_on_line(lamination: FiniteLamination, point: complex, theta: float, L: float) -> GeodesicArc:
    line = GeodesicArc.from_direction(point, theta, -L, L)
    best_arc, best = None, -1.0
    starts = [s - line.s0 - L - START_SHIFT for s, _ in _crossing_parameters(lamination, line)]
    for start in [-L + START_SHIFT, -START_SHIFT] + starts:
        start = min(max(start, -L + START_SHIFT), -START_SHIFT)
        arc = GeodesicArc.from_direction(point, theta, start, start + L)
        measure = transverse_measure(lamination, arc)
        if measure > best:
            best_arc, best = arc, measure
    return best_arc


def average_bending_norm(lamination: FiniteLamination, L: float, window: Optional[Disk] = None) -> float:
    """||lamination||_L restricted to arcs meeting the window (a lower bound on the true sup)."""
    return bending_norm_search(lamination, L, window).value


def brute_force_norm(
    lamination: FiniteLamination,
    L: float,
    geodesics: Sequence[Tuple[float, float]],
    span: float = 2.0,
    steps: Optional[int] = None,
) -> float:
    """
    Max transverse measure over arcs (s0, s0 + L) along the given geodesics

    s0 runs over a uniform grid of [-span, span]; parameters are measured from
    the point of each geodesic closest to the origin.
    """
    if steps is None:
        steps = 16 * SEARCH_OFFSETS
    best = 0.0
    for alpha, beta in geodesics:
        for s0 in np.linspace(-span, span, steps):
            arc = GeodesicArc(alpha, beta, float(s0), float(s0) + L)
            best = max(best, transverse_measure(lamination, arc))
    return best


@dataclass(frozen=True)
class PleatedPlane:
    """
    Bent copy of H^2 in upper half-space

    H^2 is the vertical half-plane over the real line, reached from the disk by
    a Cayley map sending `pole` to infinity. Each leaf carries an elliptic
    rotation by its weight about its own axis, oriented with the basepoint on
    the left; the region of x is mapped by the product of the rotations of the
    leaves crossed from the basepoint, first crossing outermost.
    """
    lamination: FiniteLamination
    basepoint: complex
    pole: float
    axes: Tuple[Tuple[float, float], ...]
    rotations: Tuple[np.ndarray, ...] = field(repr=False, compare=False)

    def to_half_plane(self, z):
        w = np.asarray(z, dtype=complex) * complex(math.cos(-self.pole), math.sin(-self.pole))
        zeta = 1j * (1.0 + w) / (1.0 - w)
        return complex(zeta) if zeta.ndim == 0 else zeta

    def crossed_leaves(self, x: complex) -> List[int]:
        x = complex(x)
        if abs(x - self.basepoint) < 1e-15:
            return []
        return crossed_leaves(self.lamination, GeodesicArc.from_points(self.basepoint, x))

    def region_isometry(self, x: complex) -> np.ndarray:
        isometry = np.eye(2, dtype=complex)
        for index in self.crossed_leaves(x):
            isometry = isometry @ self.rotations[index]
        return isometry

    def __call__(self, x: complex) -> HalfSpacePoint:
        zeta = self.to_half_plane(complex(x))
        flat = HalfSpacePoint(complex(zeta.real, 0.0), zeta.imag)
        return mobius_action(self.region_isometry(x), flat)


def _boundary_to_real(angle: float, pole: float) -> float:
    return -1.0 / math.tan(0.5 * (angle - pole))


def _rotation_about(p: float, q: float, theta: float) -> np.ndarray:
    """Elliptic map fixing p and q with multiplier e^{i theta} at q."""
    conj = np.array([[p, q], [1.0, 1.0]], dtype=complex)
    diagonal = np.diag([np.exp(0.5j * theta), np.exp(-0.5j * theta)])
    return conj @ diagonal @ np.linalg.inv(conj)


def _largest_gap_midpoint(angles: List[float]) -> float:
    if not angles:
        return 0.0
    ordered = sorted(set(angles))
    gaps = [(ordered[(i + 1) % len(ordered)] - ordered[i]) % TWO_PI for i in range(len(ordered))]
    i = int(np.argmax(gaps))
    return _normalize_angle(ordered[i] + 0.5 * gaps[i])


def _on_leaf(lamination: FiniteLamination, z: complex) -> bool:
    normals = lamination.normals()
    if len(normals) == 0:
        return False
    x = _disk_to_hyperboloid(z)
    return bool(np.any(np.abs(normals @ x) <= 1e-12 * np.linalg.norm(normals, axis=1) * np.linalg.norm(x)))


def pleated_plane(lamination: FiniteLamination, basepoint: complex = 0j) -> PleatedPlane:
    """
    Pleated plane bent along the lamination, anchored at the region of `basepoint`

    Raises:
        ConvexityError: a weight lies outside (0, pi)
        LaminationError: the basepoint lies on a leaf
    """
    basepoint = complex(basepoint)
    if abs(basepoint) >= 1:
        raise DomainError(f"basepoint must lie in the unit disk, got {basepoint}")
    for weight in lamination.weights:
        if not 0 < weight < math.pi:
            raise ConvexityError(f"bending angles must lie in (0, pi), got {weight}")
    if _on_leaf(lamination, basepoint):
        raise LaminationError("basepoint lies on a leaf")

    pole = _largest_gap_midpoint([a for leaf in lamination.leaves for a in leaf])
    w = basepoint * complex(math.cos(-pole), math.sin(-pole))
    base_zeta = 1j * (1.0 + w) / (1.0 - w)

    axes, rotations = [], []
    for (a, b), theta in zip(lamination.leaves, lamination.weights):
        p, q = sorted((_boundary_to_real(a, pole), _boundary_to_real(b, pole)))
        center, radius = 0.5 * (p + q), 0.5 * (q - p)
        if abs(base_zeta - center) < radius:
            p, q = q, p
        axes.append((p, q))
        rotations.append(_rotation_about(p, q, theta))
    return PleatedPlane(lamination, basepoint, pole, tuple(axes), tuple(rotations))


def lipschitz_check(
    plane: PleatedPlane,
    samples: int = 2000,
    radius: float = 0.9,
    seed: int = 0,
    pairs: Optional[Sequence[Tuple[complex, complex]]] = None,
) -> float:
    """
    Max over sampled pairs of d(p(x), p(y)) / d(x, y)

    Pairs are drawn uniformly from the disk of the given euclidean radius
    unless given explicitly.
    """
    if pairs is None:
        rng = np.random.default_rng(seed)
        r = radius * np.sqrt(rng.uniform(size=(samples, 2)))
        phi = rng.uniform(0.0, TWO_PI, size=(samples, 2))
        z = r * np.exp(1j * phi)
        pairs = list(zip(z[:, 0], z[:, 1]))

    worst = 0.0
    for x, y in pairs:
        domain = disk_distance(x, y)
        if domain < 1e-6:
            continue
        image = hyperbolic_distance(plane(x), plane(y))
        worst = max(worst, image / domain)
    return worst


def _real_mobius_on_plane(g: np.ndarray, zeta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized mobius_action on points (Re zeta, 0, Im zeta)."""
    a, b, c, d = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    det = np.sqrt(a * d - b * c)
    a, b, c, d = a / det, b / det, c / det, d / det
    x, t = zeta.real, zeta.imag
    denom = c * x + d
    norm = np.abs(denom) ** 2 + np.abs(c) ** 2 * t * t
    z_new = ((a * x + b) * np.conj(denom) + a * np.conj(c) * t * t) / norm
    return z_new, t / norm


def _image_along_line(plane: PleatedPlane, frame: np.ndarray, tangent: np.ndarray, s: np.ndarray):
    """Images of the points cosh(s) X + sinh(s) V of a line through the basepoint."""
    normals = plane.lamination.normals()
    points = np.cosh(s)[:, None] * frame + np.sinh(s)[:, None] * tangent
    zeta = plane.to_half_plane(_hyperboloid_to_disk(points))

    crossings = []
    if len(normals) > 0:
        c_x = normals @ frame
        c_v = normals @ tangent
        for index, (cx, cv) in enumerate(zip(c_x, c_v)):
            if abs(cx) < abs(cv):
                crossings.append((math.atanh(-cx / cv), index))

    z_img = np.empty(len(s), dtype=complex)
    t_img = np.empty(len(s))
    for sign in (1.0, -1.0):
        side = sorted((sign * sc, index) for sc, index in crossings if sign * sc > 0)
        mask = sign * s >= 0
        if not np.any(mask):
            continue
        depth = np.searchsorted([sc for sc, _ in side], sign * s[mask], side="left")
        isometry = np.eye(2, dtype=complex)
        products = [isometry]
        for _, index in side:
            isometry = isometry @ plane.rotations[index]
            products.append(isometry)
        z_side = np.empty(int(mask.sum()), dtype=complex)
        t_side = np.empty(int(mask.sum()))
        for k, g in enumerate(products):
            chosen = depth == k
            if np.any(chosen):
                z_side[chosen], t_side[chosen] = _real_mobius_on_plane(g, zeta[mask][chosen])
        z_img[mask] = z_side
        t_img[mask] = t_side
    return z_img, t_img


def self_intersection_hint(
    plane: PleatedPlane,
    levels: Optional[int] = None,
    directions: int = EMBEDDING_DIRECTIONS,
    half_length: float = EMBEDDING_HALF_LENGTH,
) -> bool:
    """
    Heuristic self-intersection test along lines through the basepoint

    At step h a line is flagged when two samples more than SEPARATION_FLOOR apart
    in H^2 have images closer than 2h. A self-intersection is reported only if
    some line is flagged at every level h = EMBEDDING_STEP / 2^k.
    """
    if levels is None:
        levels = EMBEDDING_LEVELS
    thetas = math.pi * np.arange(directions) / directions
    frames, tangents = _tangent_frames(np.array([plane.basepoint]), thetas)

    for line in range(directions):
        flagged = True
        for level in range(levels):
            h = EMBEDDING_STEP / 2 ** level
            s = np.arange(-half_length, half_length + 0.5 * h, h)
            z_img, t_img = _image_along_line(plane, frames[0], tangents[0, line], s)
            gap = (np.abs(z_img[:, None] - z_img[None, :]) ** 2 + (t_img[:, None] - t_img[None, :]) ** 2)
            arg = gap / (2.0 * t_img[:, None] * t_img[None, :])
            close = arg < math.cosh(2.0 * h) - 1.0
            apart = np.abs(s[:, None] - s[None, :]) > SEPARATION_FLOOR
            if not np.any(close & apart):
                flagged = False
                break
        if flagged:
            logger.info("self-intersection suspected along direction %.4f", thetas[line])
            return True
    return False


@dataclass(frozen=True)
class BendingBoundResult:
    norm: float
    embedded_hint: bool
    estimate: BendingNormEstimate

    @property
    def consistent(self) -> bool:
        """An embedded-looking plane must have norm below 2 pi."""
        return not self.embedded_hint or self.norm < TWO_PI


def _basepoint_off_leaves(lamination: FiniteLamination, center: complex) -> complex:
    if not _on_leaf(lamination, center):
        return center
    for k in range(1, 64):
        candidate = center + 1e-3 * k * complex(math.cos(k), math.sin(k))
        if not _on_leaf(lamination, candidate):
            return candidate
    raise LaminationError("no basepoint off the leaves near the window center")


def bending_bound_check(
    lamination: FiniteLamination,
    L: float = BENDING_ARC_LENGTH,
    window: Optional[Disk] = None,
) -> BendingBoundResult:
    """
    Windowed ||lamination||_L together with an embeddedness heuristic for its pleated plane

    The heuristic is sampled evidence only, never a proof of embeddedness.
    """
    if window is None:
        window = DEFAULT_WINDOW
    estimate = bending_norm_search(lamination, L, window)
    plane = pleated_plane(lamination, _basepoint_off_leaves(lamination, window.center))
    embedded = not self_intersection_hint(plane)
    result = BendingBoundResult(norm=estimate.value, embedded_hint=embedded, estimate=estimate)
    if not result.consistent:
        logger.warning("embedded-looking plane with bending norm %.6f >= 2 pi", estimate.value)
    return result
