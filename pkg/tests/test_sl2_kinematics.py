import cmath
import math

import numpy as np
import pytest
from scipy.linalg import expm

from geometry.sl2_kinematics import (
    HalfSpacePoint,
    Sl2Matrix,
    axis_frame,
    bracket,
    bundle_norm_squared,
    elliptic_axis_angle,
    exp_sl2,
    hyperbolic_distance,
    killing_field,
    mobius_action,
    norm_on_axis,
    parabolic_section,
    parabolic_section_dz,
    projective_field,
    section_norm_from_field,
    t_operator_parabolic,
)
from utils.errors import DomainError


def random_sl2(rng) -> Sl2Matrix:
    a, b, c = rng.normal(size=3) + 1j * rng.normal(size=3)
    return Sl2Matrix(complex(a), complex(b), complex(c))


def random_sl2_group(rng) -> np.ndarray:
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return g / cmath.sqrt(np.linalg.det(g))


def test_translation_killing_field():
    v = killing_field(Sl2Matrix(b=1.0), HalfSpacePoint(0j, 1.0))
    assert v.as_array() == pytest.approx([1.0, 0.0, 0.0], abs=1e-8)


def test_dilation_killing_field():
    v = killing_field(Sl2Matrix(a=0.5), HalfSpacePoint(0j, 1.0))
    assert v.as_array() == pytest.approx([0.0, 0.0, 1.0], abs=1e-8)


def test_translation_norm_on_axis():
    assert norm_on_axis(Sl2Matrix(b=1.0), 1.0) == pytest.approx(2.0)


def test_projective_field_normalization():
    assert projective_field(Sl2Matrix(b=1.0), 0.3 + 0.1j) == pytest.approx(2.0)
    assert projective_field(Sl2Matrix(a=1.0), 0.5j) == pytest.approx(2.0j)


def test_norm_on_axis_matches_killing_oracle(rng):
    for _ in range(30):
        m = random_sl2(rng)
        t = float(rng.uniform(0.2, 5.0))
        closed = norm_on_axis(m, t)
        oracle = bundle_norm_squared(m, HalfSpacePoint(0j, t))
        assert oracle == pytest.approx(closed, rel=1e-8)


def test_norm_on_axis_rejects_nonpositive_height():
    with pytest.raises(DomainError):
        norm_on_axis(Sl2Matrix(b=1.0), 0.0)


def test_bracket_is_the_commutator(rng):
    for _ in range(10):
        m1, m2 = random_sl2(rng), random_sl2(rng)
        commutator = m1.matrix() @ m2.matrix() - m2.matrix() @ m1.matrix()
        assert bracket(m1, m2).matrix() == pytest.approx(commutator, abs=1e-12)


def test_exp_sl2_matches_expm(rng):
    for s in (0.3, 1.0, 2.5):
        m = random_sl2(rng)
        assert exp_sl2(m, s) == pytest.approx(expm(s * m.matrix()), rel=1e-10, abs=1e-12)


def test_exp_sl2_nilpotent():
    m = Sl2Matrix(b=2.0)
    assert exp_sl2(m, 0.5) == pytest.approx(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_mobius_action_is_an_isometry(rng):
    for _ in range(20):
        g = random_sl2_group(rng)
        p = HalfSpacePoint(complex(*rng.normal(size=2)), float(rng.uniform(0.3, 2.0)))
        q = HalfSpacePoint(complex(*rng.normal(size=2)), float(rng.uniform(0.3, 2.0)))
        before = hyperbolic_distance(p, q)
        after = hyperbolic_distance(mobius_action(g, p), mobius_action(g, q))
        assert after == pytest.approx(before, rel=1e-9)


def test_vertical_distance():
    assert hyperbolic_distance(HalfSpacePoint(0j, 1.0), HalfSpacePoint(0j, math.e)) == pytest.approx(1.0)


def test_axis_frame_translations():
    t = 0.7
    frame = axis_frame(t)
    p = HalfSpacePoint(0j, t)
    assert killing_field(frame.dx, p).as_array() == pytest.approx([1.0, 0.0, 0.0], abs=1e-8)
    assert killing_field(frame.dy, p).as_array() == pytest.approx([0.0, 1.0, 0.0], abs=1e-8)
    assert killing_field(frame.dt, p).as_array() == pytest.approx([0.0, 0.0, 1.0], abs=1e-8)
    assert frame.unit_normal.a == pytest.approx(0.5)


def test_parabolic_section_field():
    z0 = 0.2 - 0.4j
    for w in (0j, 1.0 + 1j, -0.3j):
        assert projective_field(parabolic_section(z0), w) == pytest.approx((w - z0) ** 2)
        assert projective_field(parabolic_section_dz(z0), w) == pytest.approx(-2.0 * (w - z0))


def test_section_norm_from_field():
    t = 1.3
    f0, f1, f2 = 1.0 + 1j, -0.5, 2j
    expected = abs(f0) ** 2 / (2 * t * t) + abs(f1) ** 2 / 4 + t * t * abs(f2) ** 2 / 2
    assert section_norm_from_field(f0, f1, f2, t) == pytest.approx(expected)


def test_t_operator_parabolic_norms():
    result = t_operator_parabolic(2j, HalfSpacePoint(0j, 2.0))
    assert result.normal_coeff == pytest.approx(1j)
    assert result.tangent_form_norm == pytest.approx(2.0 * math.sqrt(2.0))
    assert result.parabolic_norm == pytest.approx(result.tangent_form_norm)


def test_t_operator_needs_axis_point():
    with pytest.raises(DomainError):
        t_operator_parabolic(1.0, HalfSpacePoint(0.5, 1.0))


def test_elliptic_axis_angle_recovers_rotation():
    p, q, theta = -1.0, 2.0, 1.0
    conj = np.array([[p, q], [1.0, 1.0]], dtype=complex)
    g = conj @ np.diag([np.exp(0.5j * theta), np.exp(-0.5j * theta)]) @ np.linalg.inv(conj)
    fixed, angle = elliptic_axis_angle(g)
    assert angle == pytest.approx(theta)
    assert sorted(z.real for z in fixed) == pytest.approx([p, q])


def test_elliptic_axis_angle_rejects_loxodromic():
    with pytest.raises(DomainError):
        elliptic_axis_angle(np.diag([2.0, 0.5]))


def test_from_matrix_requires_trace_zero():
    with pytest.raises(DomainError):
        Sl2Matrix.from_matrix(np.eye(2))


def test_half_space_point_height():
    with pytest.raises(DomainError):
        HalfSpacePoint(0j, 0.0)


@pytest.mark.slow
def test_norm_on_axis_matches_killing_oracle_dense(rng):
    for _ in range(1000):
        m = random_sl2(rng)
        t = float(rng.uniform(0.2, 5.0))
        oracle = bundle_norm_squared(m, HalfSpacePoint(0j, t))
        assert oracle == pytest.approx(norm_on_axis(m, t), rel=1e-8)


def test_norm_on_axis_under_diagonal_conjugation(rng):
    # diag(lam, 1/lam) moves (0, t) to (0, |lam|^2 t)
    for _ in range(50):
        m = random_sl2(rng)
        lam = complex(rng.uniform(0.3, 3.0) * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))
        t = float(rng.uniform(0.2, 5.0))
        moved = m.conjugate_by(np.diag([lam, 1.0 / lam]))
        assert norm_on_axis(moved, abs(lam) ** 2 * t) == pytest.approx(norm_on_axis(m, t), rel=1e-10)


def test_bracket_antisymmetry_and_jacobi(rng):
    for _ in range(20):
        x, y, z = random_sl2(rng), random_sl2(rng), random_sl2(rng)
        assert (bracket(x, y) + bracket(y, x)).max_abs() < 1e-12
        jacobi = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
        assert jacobi.max_abs() < 1e-10


@pytest.mark.parametrize("t", np.geomspace(1e-3, 10.0, 10))
def test_parabolic_section_norm_at_origin(t):
    assert norm_on_axis(parabolic_section(0j), t) == pytest.approx(t * t / 2.0, rel=1e-12)


def test_t_operator_parabolic_unit_example():
    result = t_operator_parabolic(1.0, HalfSpacePoint(0j, 1.0))
    assert result.normal_coeff == pytest.approx(0.5)
    assert result.tangent_form_norm == pytest.approx(1.0 / math.sqrt(2.0))
    assert result.parabolic_norm == pytest.approx(1.0 / math.sqrt(2.0))
