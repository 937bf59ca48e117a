import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from src.core.base import InvalidTransformError, NonCompactError, OutsideDomainError, PreconditionError
from src.core.conversions import from_klein
from src.core.minkowski import apply_lorentz
from src.core.models import HPoint, LorentzTransform
from src.managers.hyperbolic import HalfSpace, build_from_halfspaces, edge_length
from src.managers.pogorelov import (
    PogorelovPairBuilder,
    PrismParams,
    are_congruent,
    compare_pair,
    counterexample_pair,
    euclidean_dihedral_angles,
    fit_euclidean_plane,
    fit_hyperbolic_plane,
    induced_isometry,
    phi,
    phi_inverse,
    prism_euclidean,
)

from .conftest import cube_halfspaces

APEX = HPoint.of(1, 0, 0, 0)
small_vectors = st.lists(st.floats(min_value=-0.4, max_value=0.4), min_size=3, max_size=3)


def random_point(rng, radius=0.8):
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    return from_klein(direction * radius * rng.uniform() ** (1 / 3))


def lorentz_image(P, A):
    return build_from_halfspaces([HalfSpace(apply_lorentz(A, h.n)) for h in P.halfspaces])


@pytest.fixture(scope='module')
def pair():
    return counterexample_pair(0.1, 0.1, 0.1, 0.0, 0.05)


class TestPhi:
    def test_apex_pair(self):
        y, y2 = phi(APEX, APEX)
        assert np.array_equal(y, np.zeros(3))
        assert np.array_equal(y2, np.zeros(3))

    def test_diagonal_is_klein(self, rng):
        for _ in range(100):
            x = random_point(rng)
            y, y2 = phi(x, x)
            assert np.allclose(y, x.x / x.x0, atol=1e-15)
            assert np.allclose(y2, y, atol=0)

    def test_inverse_at_origin(self):
        x, y = phi_inverse(np.zeros(3), np.zeros(3))
        assert np.allclose(x.coords, APEX.coords)
        assert np.allclose(y.coords, APEX.coords)

    def test_round_trip(self, rng):
        for _ in range(10 ** 5):
            x, y = random_point(rng), random_point(rng)
            x2, y2 = phi_inverse(*phi(x, y))
            assert np.allclose(x2.coords, x.coords, atol=1e-12 * x.x0, rtol=0)
            assert np.allclose(y2.coords, y.coords, atol=1e-12 * y.x0, rtol=0)

    @given(small_vectors, small_vectors)
    @settings(max_examples=200)
    def test_inverse_round_trip(self, a, b):
        y, y2 = phi(*phi_inverse(a, b))
        assert np.allclose(y, a, atol=1e-12)
        assert np.allclose(y2, b, atol=1e-12)

    def test_outside_image(self):
        with pytest.raises(OutsideDomainError):
            phi_inverse([1.0, 0, 0], [0, 1.0, 0])


class TestInducedIsometry:
    def test_identity(self):
        B = induced_isometry(LorentzTransform.identity())
        assert np.allclose(B.D, 0)
        assert np.allclose(B.R, np.eye(3))

    def test_boost(self):
        t = 0.8
        B = induced_isometry(LorentzTransform.boost(t))
        assert np.allclose(B.D, [2 * math.tanh(t / 2), 0, 0], atol=1e-14)
        assert B.det == pytest.approx(1.0)
        assert B.proper

    def test_rotation(self):
        R = Rotation.from_rotvec([0.1, 0.7, -0.3]).as_matrix()
        B = induced_isometry(LorentzTransform.rotation(R))
        assert np.allclose(B.D, 0)
        assert np.allclose(B.R, R, atol=1e-14)

    def test_reflection_reverses_orientation(self):
        B = induced_isometry(LorentzTransform.reflection(3))
        assert B.det == pytest.approx(-1.0)
        assert not B.proper
        assert np.allclose(B.R, np.diag([1.0, 1.0, -1.0]))

    def test_pairs_are_related_by_the_isometry(self, rng):
        for _ in range(100):
            A = LorentzTransform.random(rng, max_rapidity=1.0)
            B = induced_isometry(A)
            assert np.allclose(B.R.T @ B.R, np.eye(3), atol=1e-10)
            x = random_point(rng, 0.6)
            y, y2 = phi(x, apply_lorentz(A, x))
            assert np.allclose(y2, B(y), atol=1e-10)

    def test_rejects_time_reversal(self):
        with pytest.raises(InvalidTransformError):
            induced_isometry(np.diag([-1.0, 1.0, 1.0, 1.0]))


class TestPrismParams:
    @pytest.mark.parametrize('args', [(0.0, 0.1, 0.1, 0.0), (0.1, 0.1, 0.1, 0.2), (0.9, 0.5, 0.5, 0.0)])
    def test_preconditions(self, args):
        with pytest.raises(PreconditionError):
            PrismParams(*args)

    def test_edge_lengths(self):
        prism = prism_euclidean(PrismParams(0.1, 0.1, 0.1, 0.0))
        lengths = prism.edge_lengths()
        assert len(lengths) == 9
        assert np.allclose(list(lengths.values()), 0.1, atol=1e-15)

    def test_shear_keeps_edge_lengths(self):
        flat = prism_euclidean(PrismParams(0.1, 0.1, 0.1, 0.0)).edge_lengths()
        sheared = prism_euclidean(PrismParams(0.1, 0.1, 0.1, 0.05)).edge_lengths()
        assert sorted(flat.values()) == pytest.approx(sorted(sheared.values()), abs=1e-15)

    def test_shear_changes_dihedral_angles(self):
        flat = euclidean_dihedral_angles(prism_euclidean(PrismParams(0.1, 0.1, 0.1, 0.0)))
        sheared = euclidean_dihedral_angles(prism_euclidean(PrismParams(0.1, 0.1, 0.1, 0.05)))
        assert max(abs(x - y) for x, y in zip(sorted(flat.values()), sorted(sheared.values()))) > 1e-2

    def test_right_prism_angles(self):
        angles = euclidean_dihedral_angles(prism_euclidean(PrismParams(0.1, 0.1, 0.1, 0.0)))
        assert sorted(angles.values()) == pytest.approx([math.pi / 3] * 3 + [math.pi / 2] * 6, abs=1e-12)


class TestPlaneFits:
    def test_euclidean(self):
        n, d, residual = fit_euclidean_plane([[0, 0, 1], [1, 0, 1], [0, 1, 1], [2, 3, 1]])
        assert residual < 1e-14
        assert abs(abs(n[2]) - 1) < 1e-14
        assert d == pytest.approx(n[2])

    def test_hyperbolic(self):
        points = [from_klein([0, y, z]) for y, z in ((0, 0), (0.3, 0.1), (-0.2, 0.4), (0.1, -0.5))]
        n, residual = fit_hyperbolic_plane(points)
        assert residual < 1e-14
        assert np.allclose(np.abs(n.coords), [0, 1, 0, 0], atol=1e-14)

    def test_planes_map_to_planes(self, rng):
        for _ in range(20):
            A = LorentzTransform.random(rng, max_rapidity=1.0)
            normal = rng.normal(size=3)
            normal /= np.linalg.norm(normal)
            offset = rng.uniform(-0.3, 0.3)
            points = []
            for _ in range(8):
                a = rng.uniform(-0.5, 0.5, size=3)
                a -= (a @ normal - offset) * normal
                points.append(from_klein(a))
            _, residual = fit_hyperbolic_plane(points)
            assert residual < 1e-12
            images = [phi(x, apply_lorentz(A, x)) for x in points]
            for k in (0, 1):
                assert fit_euclidean_plane([image[k] for image in images])[2] < 1e-9


class TestPair:
    def test_equal_edge_lengths(self, pair):
        F, F_prime = pair
        first = sorted(edge_length(F, e.id) for e in F.combinatorics.edges)
        second = sorted(edge_length(F_prime, e.id) for e in F_prime.combinatorics.edges)
        assert np.allclose(first, second, atol=1e-10, rtol=0)

    def test_compact_prisms(self, pair):
        for P in pair:
            assert P.is_compact
            assert (P.combinatorics.V, P.combinatorics.E, P.combinatorics.F) == (6, 9, 5)

    def test_not_congruent(self, pair):
        assert not are_congruent(*pair)

    def test_report(self, pair):
        report = compare_pair(*pair)
        assert report.verdict == 'ACCEPT'
        assert report.metrics['edge_lengths']['max_gap'] <= 1e-10
        assert report.metrics['dihedral_angles']['max_gap'] > 1e-3

    def test_builder(self):
        builder = PogorelovPairBuilder()
        report = builder.run(0.1, 0.1, 0.1, 0.0, 0.05)
        assert report.accepted
        assert len(builder.pair) == 2

    def test_same_shear_is_congruent(self):
        F, F_prime = counterexample_pair(0.1, 0.1, 0.1, 0.03, 0.03)
        report = compare_pair(F, F_prime)
        assert report.condition('non_congruent').passed is False


class TestCongruence:
    def test_lorentz_image(self, rng, compact_cube):
        for _ in range(3):
            A = LorentzTransform.random(rng, max_rapidity=0.5)
            assert are_congruent(compact_cube, lorentz_image(compact_cube, A))

    def test_reflected_image(self, pair):
        F, _ = pair
        assert are_congruent(F, lorentz_image(F, LorentzTransform.reflection(2)))

    def test_different_sizes(self, compact_cube):
        assert not are_congruent(compact_cube, build_from_halfspaces(cube_halfspaces(0.2)))

    def test_non_compact(self, compact_cube, ideal_octahedron):
        with pytest.raises(NonCompactError):
            are_congruent(compact_cube, ideal_octahedron)
