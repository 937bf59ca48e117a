import math

import pytest

from src.core.base import InvalidInputError, InvalidSurfaceError, PreconditionError, Settings, UnsupportedInputError
from src.managers.geodesics import Certified, Inconclusive, Refuted
from src.managers.hyperbolic import SphericalPolygon, build_from_halfspaces, dihedral_angle, face_area, vertex_link
from src.managers.polar import (
    AdmissibilityChecker,
    AdmissibilityReport,
    ConeMetricSurface,
    IdealAdmissibilityChecker,
    check_admissible,
    check_ideally_admissible,
    cone_angles,
    cone_points,
    expanded_dihedral_angles,
    gauss_image,
    spherical_polar_polygon,
    suspension_metric,
    t_expansion,
)

from .conftest import OCTANT, cube_halfspaces

TWO_PI = 2 * math.pi
RIGHT = math.pi / 2


class TestPolarPolygon:
    def test_octant_is_self_polar(self):
        assert spherical_polar_polygon(OCTANT).congruent_to(OCTANT)

    def test_involution(self, compact_cube):
        link = vertex_link(compact_cube, 0)
        twice = spherical_polar_polygon(spherical_polar_polygon(link))
        assert twice.sides == pytest.approx(link.sides, abs=1e-12)
        assert twice.angles == pytest.approx(link.angles, abs=1e-12)

    def test_polar_of_link_closes(self, compact_cube):
        for v in compact_cube.combinatorics.vertices:
            assert spherical_polar_polygon(vertex_link(compact_cube, v)).is_consistent()

    def test_non_convex(self):
        with pytest.raises(InvalidSurfaceError):
            spherical_polar_polygon(SphericalPolygon((1.0,) * 4, (RIGHT, 4.0, RIGHT, RIGHT)))


class TestSurface:
    def test_pillow_structure(self, pillow):
        assert (pillow.V, pillow.E, pillow.F) == (3, 3, 2)
        assert pillow.euler_characteristic == 2

    def test_pillow_cone_points(self, pillow):
        assert cone_points(pillow) == pytest.approx({0: math.pi, 1: math.pi, 2: math.pi})

    def test_pillow_rejected_for_small_angles(self, pillow):
        report = check_admissible(pillow, max_depth=2)
        condition = report.condition('cone_angles')
        assert condition.passed is False
        assert set(condition.witness['vertices']) == {0, 1, 2}
        assert not report.accepted

    def test_unglued_side(self):
        with pytest.raises(InvalidSurfaceError):
            ConeMetricSurface((OCTANT, OCTANT), (((0, 0), (1, 2)), ((0, 1), (1, 1))))

    def test_side_glued_twice(self):
        with pytest.raises(InvalidSurfaceError):
            ConeMetricSurface((OCTANT, OCTANT), (((0, 0), (1, 2)), ((0, 0), (1, 1)), ((0, 2), (1, 0))))

    def test_missing_side(self):
        with pytest.raises(InvalidSurfaceError):
            ConeMetricSurface((OCTANT, OCTANT), (((0, 0), (1, 3)), ((0, 1), (1, 1)), ((0, 2), (1, 0))))

    def test_length_mismatch(self):
        other = SphericalPolygon((RIGHT, RIGHT, 1.0), (RIGHT, 1.0, RIGHT))
        with pytest.raises(InvalidSurfaceError):
            ConeMetricSurface((OCTANT, other), (((0, 0), (1, 2)), ((0, 1), (1, 1)), ((0, 2), (1, 0))))

    def test_to_dict(self, pillow):
        data = pillow.to_dict()
        assert data['gluings'][0] == [0, 0, 1, 2]
        assert len(data['cells']) == 2


class TestGaussImage:
    @pytest.fixture
    def tetrahedron_image(self, compact_tetrahedron):
        return gauss_image(compact_tetrahedron)

    def test_cells_are_vertices(self, compact_tetrahedron, tetrahedron_image):
        assert tetrahedron_image.F == 4
        assert tuple(tetrahedron_image.cell_labels) == tuple(compact_tetrahedron.combinatorics.vertices)
        assert tetrahedron_image.V == 4

    def test_gluing_lengths(self, compact_cube):
        G = gauss_image(compact_cube)
        for g, e in enumerate(compact_cube.combinatorics.edges):
            assert G.gluing_length(g) == pytest.approx(math.pi - dihedral_angle(compact_cube, e.id), abs=1e-12)

    def test_cone_angle_is_two_pi_plus_area(self, compact_cube):
        G = gauss_image(compact_cube)
        assert len(G.point_labels) == 6
        for v, face in G.point_labels.items():
            area = face_area(compact_cube, face)
            assert G.cone_angle(v) == pytest.approx(TWO_PI + area, abs=1e-10)
            assert G.cone_angle(v) > TWO_PI

    def test_euclidean_limit(self):
        excess = []
        for s in (1.0, 0.1, 0.01):
            G = gauss_image(build_from_halfspaces(cube_halfspaces(0.3 * s)))
            excess.append(max(a - TWO_PI for a in cone_angles(G).values()))
        assert excess == sorted(excess, reverse=True)
        assert excess[-1] < 1e-3

    def test_hyperinfinite_rejected(self):
        with pytest.raises(UnsupportedInputError):
            gauss_image(build_from_halfspaces(cube_halfspaces(0.7)))

    def test_tetrahedron_certified(self, tetrahedron_image):
        report = check_admissible(tetrahedron_image)
        assert report.metrics['depth'] == 12
        assert isinstance(report.geodesics, Certified)
        assert report.accepted
        assert report.condition('sphere').passed
        assert report.condition('curvature').passed

    def test_cube_certified(self, compact_cube):
        report = check_admissible(gauss_image(compact_cube))
        assert isinstance(report.geodesics, Certified)
        assert report.accepted

    def test_checker(self, tetrahedron_image):
        report = AdmissibilityChecker(depth=4).run(tetrahedron_image)
        assert report.verdict == 'ACCEPT'
        assert report.metrics['depth'] == 4

    def test_node_budget_is_inconclusive(self, tetrahedron_image):
        report = check_admissible(tetrahedron_image, max_depth=4, settings=Settings(node_budget=10))
        assert isinstance(report.geodesics, Inconclusive)
        assert report.condition('geodesics').passed is None
        assert not report.accepted


class TestSuspension:
    def test_five_right_lunes(self):
        Q = suspension_metric([RIGHT] * 5)
        assert Q.cone_angle(0) == pytest.approx(2.5 * math.pi)
        report = check_admissible(Q, max_depth=4)
        assert isinstance(report.geodesics, Refuted)
        assert report.geodesics.length == pytest.approx(TWO_PI, abs=1e-9)
        assert not report.accepted

    def test_round_sphere(self):
        report = check_admissible(suspension_metric([math.pi, math.pi]), max_depth=4)
        assert isinstance(report.geodesics, Refuted)
        assert report.condition('cone_angles').passed

    def test_single_lune(self):
        with pytest.raises(InvalidInputError):
            suspension_metric([math.pi])

    def test_not_ideally_admissible(self):
        report = check_ideally_admissible(suspension_metric([RIGHT] * 4))
        assert report.condition('gluing_lengths').passed is False
        assert report.condition('steinitz').passed is False
        assert report.condition('cycles').passed is None


    def test_three_hemispheres_not_ideally_admissible(self):
        report = check_ideally_admissible(suspension_metric([math.pi] * 3))
        assert report.condition('hemispheres').passed
        assert set(report.condition('gluing_lengths').witness['gluings']) == {0, 1, 2}
        assert not report.accepted


class TestInconclusiveReport:
    def test_never_accepts(self):
        report = AdmissibilityReport((), None, Inconclusive(3, 'node budget exhausted'))
        assert not report.accepted
        assert report.verdict == 'REJECT'


class TestIdeal:
    @pytest.fixture
    def octahedron_image(self, ideal_octahedron):
        return gauss_image(ideal_octahedron)

    def test_cells_are_hemispheres(self, octahedron_image):
        for cell in octahedron_image.cells:
            assert cell.angles == pytest.approx((math.pi,) * 4, abs=1e-12)
            assert cell.perimeter == pytest.approx(TWO_PI, abs=1e-12)

    def test_ideally_admissible(self, octahedron_image):
        report = check_ideally_admissible(octahedron_image)
        assert report.accepted
        assert report.metrics['longest_gluing'] == pytest.approx(RIGHT, abs=1e-12)

    def test_checker(self, octahedron_image):
        assert IdealAdmissibilityChecker().run(octahedron_image).verdict == 'ACCEPT'

    def test_expansion_cone_angles(self, octahedron_image):
        Qt = t_expansion(octahedron_image, 0.1)
        assert Qt.F == 24
        special = [v for v, kind in Qt.point_labels.items() if kind == 'special']
        assert len(special) == 6
        for v in special:
            assert Qt.cone_angle(v) == pytest.approx(2.2 * math.pi, abs=1e-12)

    def test_expansion_upper_bound(self, octahedron_image):
        # longest gluing is pi/2, so t must stay below 1
        with pytest.raises(PreconditionError):
            t_expansion(octahedron_image, 1.0)
        with pytest.raises(PreconditionError):
            t_expansion(octahedron_image, 0.0)

    def test_expansion_requires_ideal_admissibility(self, compact_tetrahedron):
        with pytest.raises(PreconditionError):
            t_expansion(gauss_image(compact_tetrahedron), 0.1)

    def test_expanded_surface_certified(self, octahedron_image):
        report = check_admissible(t_expansion(octahedron_image, 0.1))
        assert report.metrics['depth'] == 72
        assert report.condition('sphere').passed
        assert report.condition('curvature').passed
        assert isinstance(report.geodesics, Certified)

    def test_expanded_dihedral_angles(self, octahedron_image):
        angles = expanded_dihedral_angles(octahedron_image, 0.1)
        assert len(angles) == 24 + 12
        values = sorted(angles.values())
        assert values[0] == pytest.approx(math.pi - 1.1 * RIGHT, abs=1e-12)
        assert values[-1] == pytest.approx(RIGHT, abs=1e-12)
