import math

import numpy as np
import pytest

from geometry.laminations import (
    BENDING_ARC_LENGTH,
    FiniteLamination,
    GeodesicArc,
    average_bending_norm,
    bending_bound_check,
    bending_norm_search,
    brute_force_norm,
    crossed_leaves,
    disk_distance,
    disk_mobius,
    dump_lamination,
    fence,
    lipschitz_check,
    load_lamination,
    pleated_plane,
    self_intersection_hint,
    transverse_measure,
)
from geometry.sl2_kinematics import elliptic_axis_angle, hyperbolic_distance
from utils.errors import ConvexityError, DomainError, LaminationError
from utils.quadrature import Disk


def test_disk_distance():
    assert disk_distance(0j, 0.5) == pytest.approx(math.log(3.0))
    assert disk_distance(0.3j, 0.3j) == 0.0
    with pytest.raises(DomainError):
        disk_distance(0j, 1.0)


def test_arc_from_points_has_hyperbolic_length():
    arc = GeodesicArc.from_points(-0.2 + 0.1j, 0.4 - 0.3j)
    assert arc.length == pytest.approx(disk_distance(-0.2 + 0.1j, 0.4 - 0.3j))
    assert arc.point(arc.s0) == pytest.approx(-0.2 + 0.1j)
    assert arc.point(arc.s1) == pytest.approx(0.4 - 0.3j)


def test_arc_validation():
    with pytest.raises(DomainError):
        GeodesicArc(0.0, 2.0 * math.pi, 0.0, 1.0)
    with pytest.raises(DomainError):
        GeodesicArc(0.0, 1.0, 1.0, 1.0)


def test_fence_crossings(three_fence):
    diameter = GeodesicArc(math.pi, 0.0, -0.7, 0.7)
    assert crossed_leaves(three_fence, diameter) == [0, 1, 2]
    assert transverse_measure(three_fence, GeodesicArc(math.pi, 0.0, -0.2, 0.2)) == 1.0


@pytest.mark.parametrize("L, expected", [(1.2, 3.0), (0.9, 2.0)])
def test_fence_norm(three_fence, L, expected):
    assert average_bending_norm(three_fence, L) == pytest.approx(expected)


def test_brute_force_along_common_perpendicular(three_fence):
    assert brute_force_norm(three_fence, 1.2, [(math.pi, 0.0)]) == 3.0
    assert brute_force_norm(three_fence, 0.9, [(math.pi, 0.0)]) == 2.0


def test_search_reports_its_resolution(three_fence):
    estimate = bending_norm_search(three_fence, 1.2, points=16, directions=8, refine_top=2)
    assert estimate.lower_bound
    assert estimate.refined == 2
    assert "8 directions" in estimate.disclosure
    assert transverse_measure(three_fence, estimate.best_arc) == pytest.approx(estimate.value)


def test_search_validation(three_fence):
    with pytest.raises(DomainError):
        average_bending_norm(three_fence, 0.0)
    with pytest.raises(DomainError):
        average_bending_norm(three_fence, 1.0, window=Disk(0.5, 0.6))


def test_empty_lamination_has_zero_norm():
    estimate = bending_norm_search(FiniteLamination(), 1.0, points=9, directions=4)
    assert estimate.value == 0.0
    assert estimate.best_arc is None


def test_transverse_measure_is_mobius_invariant(three_fence):
    arc = GeodesicArc.from_points(-0.6, 0.6)
    moved = disk_mobius(0.7, 0.2 + 0.1j)
    assert transverse_measure(three_fence, arc) == 3.0
    assert transverse_measure(moved.lamination(three_fence), moved.arc(arc)) == 3.0


def test_linked_leaves_rejected():
    with pytest.raises(LaminationError):
        FiniteLamination(((0.0, math.pi), (math.pi / 2, 3 * math.pi / 2)), (1.0, 1.0))


def test_shared_endpoint_allowed():
    lamination = FiniteLamination(((0.0, math.pi), (0.0, math.pi / 2)), (1.0, 2.0))
    assert lamination.total_weight == 3.0


@pytest.mark.parametrize(
    "leaves, weights",
    [
        (((0.0, 1.0),), (0.0,)),
        (((0.0, 1.0),), (1.0, 2.0)),
        (((0.5, 0.5 + 2.0 * math.pi),), (1.0,)),
        (((0.0, 1.0), (1.0, 0.0)), (1.0, 1.0)),
    ],
)
def test_invalid_laminations(leaves, weights):
    with pytest.raises(LaminationError):
        FiniteLamination(leaves, weights)


def test_arc_inside_a_leaf():
    lamination = FiniteLamination(((0.0, math.pi),), (1.0,))
    with pytest.raises(LaminationError):
        transverse_measure(lamination, GeodesicArc(0.0, math.pi, -1.0, 1.0))


def test_corpus_round_trip(three_fence, tmp_path):
    path = tmp_path / "fence.txt"
    dump_lamination(three_fence, str(path), header="three leaves")
    assert load_lamination(str(path)) == three_fence


def test_corpus_file_norm(data_dir):
    lamination = load_lamination(str(data_dir / "laminations" / "fence_three.txt"))
    assert len(lamination) == 3
    assert average_bending_norm(lamination, BENDING_ARC_LENGTH) == pytest.approx(3.0)


def test_pleated_plane_is_one_lipschitz(three_fence):
    plane = pleated_plane(three_fence, 0.1)
    assert lipschitz_check(plane, samples=500) <= 1.0 + 1e-9


def test_pleated_plane_fixes_basepoint_region(three_fence):
    plane = pleated_plane(three_fence, 0.1)
    assert plane.crossed_leaves(0.1) == []
    assert plane.crossed_leaves(0.9) == [2]


def test_pleated_plane_is_isometric_inside_a_region(three_fence):
    plane = pleated_plane(three_fence, 0.1)
    x, y = 0.05 + 0.3j, 0.15 - 0.2j
    assert lipschitz_check(plane, pairs=[(x, y)]) == pytest.approx(1.0)


def test_pleated_plane_validation(three_fence):
    with pytest.raises(ConvexityError):
        pleated_plane(fence(3, 0.5, weight=3.5), 0.1)
    with pytest.raises(LaminationError):
        pleated_plane(three_fence, 0j)
    with pytest.raises(DomainError):
        pleated_plane(three_fence, 1.5)


def test_single_bend_looks_embedded():
    lamination = FiniteLamination(((-math.pi / 2, math.pi / 2),), (3.0,))
    assert not self_intersection_hint(pleated_plane(lamination, 0.1))


def test_tight_fence_wraps_around():
    lamination = fence(8, 0.05)
    assert lamination.total_weight > 2.0 * math.pi
    assert self_intersection_hint(pleated_plane(lamination))


def test_bending_bound_check(three_fence):
    result = bending_bound_check(three_fence)
    assert result.norm == pytest.approx(3.0)
    assert result.embedded_hint
    assert result.consistent


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.5])
def test_single_leaf_rotation_axis_and_angle(theta):
    lamination = FiniteLamination(((-math.pi / 2, math.pi / 2),), (theta,))
    plane = pleated_plane(lamination, 0.1)
    assert plane.crossed_leaves(-0.5) == [0]
    assert plane.region_isometry(-0.5) == pytest.approx(plane.rotations[0])
    fixed, angle = elliptic_axis_angle(plane.region_isometry(-0.5))
    assert angle == pytest.approx(theta)
    assert max(abs(z.imag) for z in fixed) < 1e-9
    assert sorted(z.real for z in fixed) == pytest.approx(sorted(plane.axes[0]))
    assert sorted(plane.axes[0]) == pytest.approx([-1.0, 1.0])


def test_pleated_plane_is_continuous_across_a_leaf():
    lamination = FiniteLamination(((-math.pi / 2, math.pi / 2),), (2.0,))
    plane = pleated_plane(lamination, 0.1)
    left, right = -1e-9 + 0.3j, 1e-9 + 0.3j
    assert plane.crossed_leaves(left) == [0]
    assert plane.crossed_leaves(right) == []
    image = hyperbolic_distance(plane(left), plane(right))
    assert image < 1e-8
    assert image <= disk_distance(left, right) + 1e-12


@pytest.mark.parametrize(
    "points, crossed",
    [
        ([0.05 + 0.1j, 0.2 - 0.15j, 0.15 + 0.2j, 0.02 - 0.05j, 0.1], []),
        ([0.5, 0.6 + 0.1j, 0.45 - 0.2j, 0.7, 0.55 + 0.3j], [2]),
    ],
)
def test_region_isometry_is_shared_inside_a_region(three_fence, points, crossed):
    plane = pleated_plane(three_fence, 0.1)
    isometry = plane.region_isometry(points[0])
    for x in points:
        assert plane.crossed_leaves(x) == crossed
        assert plane.region_isometry(x) == pytest.approx(isometry)
    if not crossed:
        assert isometry == pytest.approx(np.eye(2))
    for i, x in enumerate(points):
        for y in points[i + 1:]:
            assert hyperbolic_distance(plane(x), plane(y)) == pytest.approx(disk_distance(x, y), rel=1e-9)


def test_fence_norm_grows_with_length(three_fence):
    norms = [average_bending_norm(three_fence, L) for L in (0.3, 0.9, 1.2, 2.0)]
    assert norms == pytest.approx([1.0, 2.0, 3.0, 3.0])
    assert all(a <= b for a, b in zip(norms, norms[1:]))


def test_fence_norm_grows_with_weights(three_fence):
    heavier_middle = FiniteLamination(three_fence.leaves, (1.0, 2.0, 1.0))
    doubled = fence(3, 0.5, weight=2.0)
    base = average_bending_norm(three_fence, 1.2)
    assert average_bending_norm(heavier_middle, 1.2) == pytest.approx(4.0)
    assert average_bending_norm(doubled, 1.2) == pytest.approx(6.0)
    assert base <= average_bending_norm(heavier_middle, 1.2) <= average_bending_norm(doubled, 1.2)


def test_transverse_measure_mobius_invariance_on_random_arcs(rng):
    unit = fence(5, 0.3)
    lamination = FiniteLamination(unit.leaves, (0.5, 1.0, 1.5, 2.0, 2.5))

    def random_point(radius):
        return radius * math.sqrt(rng.uniform()) * complex(np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))

    measures = []
    for _ in range(300):
        moved = disk_mobius(rng.uniform(0.0, 2.0 * math.pi), random_point(0.7))
        arc = GeodesicArc.from_points(random_point(0.8), random_point(0.8))
        measure = transverse_measure(lamination, arc)
        assert transverse_measure(moved.lamination(lamination), moved.arc(arc)) == pytest.approx(measure)
        measures.append(measure)
    assert max(measures) > 0.0


def test_bending_bound_check_on_a_single_leaf():
    result = bending_bound_check(FiniteLamination(((-math.pi / 2, math.pi / 2),), (3.0,)))
    assert result.norm == pytest.approx(3.0)
    assert result.embedded_hint
    assert result.consistent
