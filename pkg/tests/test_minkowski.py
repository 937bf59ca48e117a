import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.base import InvalidInputError, InvalidTransformError, InvalidTriangleError, QuadricError
from src.core.conversions import from_klein
from src.core.minkowski import (
    apply_lorentz,
    hyperbolic_angle,
    hyperbolic_distance,
    lorentz_identity_defect,
    minkowski_inner,
    safe_arccosh,
    spherical_angle_from_sides,
    spherical_side_from_angle,
    spherical_turning_in_lune,
)
from src.core.models import DSPoint, HPoint, LorentzTransform

APEX = HPoint.of(1, 0, 0, 0)
UNIT_AWAY = HPoint.of(math.cosh(1), math.sinh(1), 0, 0)


def random_point(rng, radius=0.8):
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    return from_klein(direction * radius * rng.uniform() ** (1 / 3))


class TestInnerProduct:
    def test_timelike_unit(self):
        assert minkowski_inner(APEX, APEX) == -1.0

    def test_points_use_the_same_form(self, rng):
        for _ in range(10):
            x = random_point(rng)
            assert x.norm2() == minkowski_inner(x, x)
            assert x.norm2() == pytest.approx(-1.0, abs=1e-12)

    def test_orthogonal_basis(self):
        assert minkowski_inner([1, 0, 0, 0], [0, 1, 0, 0]) == 0.0

    def test_boosted_against_apex(self):
        assert minkowski_inner(UNIT_AWAY, APEX) == pytest.approx(-math.cosh(1), abs=1e-15)


class TestQuadrics:
    def test_hpoint_rejects_lower_sheet(self):
        with pytest.raises(QuadricError):
            HPoint.of(-1, 0, 0, 0)

    def test_hpoint_rejects_far_vector(self):
        with pytest.raises(QuadricError):
            HPoint.of(2, 0, 0, 0)

    def test_hpoint_renormalizes_small_drift(self):
        p = HPoint.of(1 + 1e-8, 0, 0, 0)
        assert minkowski_inner(p, p) == pytest.approx(-1.0, abs=1e-15)

    def test_desitter_normalize(self):
        n = DSPoint.normalize([1, 2, 0, 0])
        assert minkowski_inner(n, n) == pytest.approx(1.0, abs=1e-15)
        assert np.allclose(n.coords, np.array([1, 2, 0, 0]) / math.sqrt(3))


class TestDistance:
    def test_zero_to_itself(self):
        assert hyperbolic_distance(UNIT_AWAY, UNIT_AWAY) == 0.0

    def test_unit_distance(self):
        assert hyperbolic_distance(UNIT_AWAY, APEX) == pytest.approx(1.0, abs=1e-12)

    def test_arccosh_clamp(self):
        assert safe_arccosh(1 - 1e-13) == 0.0
        with pytest.raises(InvalidInputError):
            safe_arccosh(0.5)

    def test_invariant_under_lorentz(self, rng):
        for _ in range(1000):
            A = LorentzTransform.random(rng)
            p, q = random_point(rng), random_point(rng)
            d = hyperbolic_distance(p, q)
            assert hyperbolic_distance(apply_lorentz(A, p), apply_lorentz(A, q)) == pytest.approx(d, abs=1e-10)


class TestLorentzTransform:
    def test_identity(self):
        p = HPoint.of(math.cosh(2), 0, math.sinh(2), 0)
        assert np.array_equal(apply_lorentz(LorentzTransform.identity(), p).coords, p.coords)

    @pytest.mark.parametrize('t', [0.3, 1.0, -2.5])
    def test_boost_of_apex(self, t):
        image = apply_lorentz(LorentzTransform.boost(t), APEX)
        assert np.allclose(image.coords, [math.cosh(t), math.sinh(t), 0, 0], atol=1e-14)

    def test_rejects_non_lorentz_matrix(self):
        with pytest.raises(InvalidTransformError):
            LorentzTransform(np.diag([1.0, 2.0, 1.0, 1.0]))

    def test_rejects_time_reversal(self):
        with pytest.raises(InvalidTransformError):
            LorentzTransform(np.diag([-1.0, 1.0, 1.0, 1.0]))

    def test_inverse(self, rng):
        A = LorentzTransform.random(rng)
        assert np.allclose((A @ A.inverse()).m, np.eye(4), atol=1e-10)

    def test_reflection_reverses_orientation(self):
        assert not LorentzTransform.reflection(2).preserves_orientation

    def test_preserves_inner_product(self, rng):
        for _ in range(1000):
            A = LorentzTransform.random(rng)
            p, q = random_point(rng), random_point(rng)
            before = minkowski_inner(p, q)
            after = minkowski_inner(A.m @ p.coords, A.m @ q.coords)
            assert after == pytest.approx(before, abs=1e-10 * max(1.0, abs(before)))

    def test_row_identity(self, rng):
        for _ in range(100):
            assert lorentz_identity_defect(LorentzTransform.random(rng)) < 1e-10


class TestHyperbolicAngle:
    def test_right_angle_at_apex(self):
        q = HPoint.of(math.cosh(1), math.sinh(1), 0, 0)
        r = HPoint.of(math.cosh(1), 0, math.sinh(1), 0)
        assert hyperbolic_angle(APEX, q, r) == pytest.approx(math.pi / 2, abs=1e-12)

    def test_degenerate_direction(self):
        with pytest.raises(InvalidInputError):
            hyperbolic_angle(APEX, APEX, UNIT_AWAY)


class TestSphericalTrigonometry:
    def test_octant(self):
        right = math.pi / 2
        assert spherical_angle_from_sides(right, right, right) == pytest.approx(right, abs=1e-15)

    @given(st.floats(min_value=math.pi / 2, max_value=2 * math.pi / 3 - 1e-3))
    @settings(max_examples=200)
    def test_equilateral_angle_not_below_side(self, side):
        assert spherical_angle_from_sides(side, side, side) >= side - 1e-12

    def test_round_trip(self, rng):
        for _ in range(1000):
            b, c = rng.uniform(0.3, math.pi - 0.3, size=2)
            alpha = rng.uniform(0.3, math.pi - 0.3)
            a = spherical_side_from_angle(b, c, alpha)
            assert spherical_angle_from_sides(a, b, c) == pytest.approx(alpha, abs=1e-10)

    @pytest.mark.parametrize('sides', [(1.0, 0.2, 0.3), (0.0, 1.0, 1.0), (2.5, 2.5, 2.5)])
    def test_invalid_triangles(self, sides):
        with pytest.raises(InvalidTriangleError):
            spherical_angle_from_sides(*sides)


class TestTurningInLune:
    @given(st.floats(min_value=0.0, max_value=math.pi))
    def test_perpendicular_crossing(self, alpha):
        assert spherical_turning_in_lune(alpha, math.pi / 2) == pytest.approx(alpha, abs=1e-7)

    @given(st.floats(min_value=0.0, max_value=math.pi))
    def test_flat_lune(self, beta):
        assert spherical_turning_in_lune(0.0, beta) == pytest.approx(0.0, abs=1e-7)

    def test_bounded_by_lune_angle(self, rng):
        for alpha, beta in rng.uniform(0.0, math.pi, size=(1000, 2)):
            assert spherical_turning_in_lune(alpha, beta) <= alpha + 1e-9

    def test_closed_form(self, rng):
        for alpha, beta in rng.uniform(0.0, math.pi, size=(100, 2)):
            cos_l = -math.cos(beta) ** 2 + math.sin(beta) ** 2 * math.cos(math.pi - alpha)
            expected = math.pi - math.acos(max(-1.0, min(1.0, cos_l)))
            assert spherical_turning_in_lune(alpha, beta) == pytest.approx(expected, abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(InvalidInputError):
            spherical_turning_in_lune(4.0, 1.0)
