import networkx as nx
import pytest

from src.core import catalog
from src.core.base import InvalidInputError, ValidationError
from src.core.polyhedron import AbstractPolyhedron, Edge, Face, from_faces
from src.managers.combinatorics import (
    CombinatoricsValidator,
    is_steinitz,
    isomorphic,
    non_inscribable_stellation,
    poincare_dual,
    stellate,
    stellation_inscribable_necessary,
    validate,
)

TETRA_CYCLES = [(0, 1, 2), (0, 3, 1), (1, 3, 2), (0, 2, 3)]


def with_face(P: AbstractPolyhedron, face_id: int, boundary) -> AbstractPolyhedron:
    faces = tuple(Face(f.id, tuple(boundary)) if f.id == face_id else f for f in P.faces)
    return AbstractPolyhedron(P.vertices, P.edges, faces)


class TestModel:
    def test_unknown_edge_reference(self):
        with pytest.raises(InvalidInputError):
            AbstractPolyhedron((0, 1), (Edge(1, 0, 1),), (Face(0, (1, 2)),))

    def test_edge_ids_positive(self):
        with pytest.raises(InvalidInputError):
            AbstractPolyhedron((0, 1), (Edge(0, 0, 1),), ())

    def test_loops_rejected(self):
        with pytest.raises(InvalidInputError):
            AbstractPolyhedron((0,), (Edge(1, 0, 0),), ())

    def test_from_faces_counts(self):
        cube = catalog.cube()
        assert (cube.V, cube.E, cube.F) == (8, 12, 6)
        assert [e.id for e in cube.edges] == list(range(1, 13))

    def test_face_vertices_follow_the_cycle(self):
        P = from_faces(TETRA_CYCLES)
        for f, cycle in zip(P.faces, TETRA_CYCLES):
            assert P.face_vertices(f.id) == list(cycle)

    def test_vertex_rotation_closes(self, solid):
        for v in solid.vertices:
            rotation = solid.vertex_rotation(v)
            assert len(rotation) == solid.vertex_degree(v)
            sharing = solid.edge_faces()
            for (f, s), (f2, _) in zip(rotation, rotation[1:] + rotation[:1]):
                assert {f, f2} == {fid for fid, _ in sharing[abs(s)]}

    def test_to_dict(self, solid):
        data = solid.to_dict()
        assert data['vertices'] == list(solid.vertices)
        assert len(data['faces']) == solid.F


class TestValidate:
    def test_corpus_passes(self, solid):
        report = validate(solid)
        assert report.accepted
        assert solid.euler_characteristic == 2
        d1, d2 = solid.boundary_matrices()
        assert not (d1 @ d2).any()

    def test_flipped_edge_breaks_boundary_of_boundary(self):
        cube = catalog.cube()
        face = cube.faces[0]
        broken = with_face(cube, face.id, (-face.boundary[0],) + face.boundary[1:])
        report = validate(broken)
        condition = report.condition('boundary_of_boundary')
        assert condition.passed is False
        assert condition.witness == {'faces': [face.id]}

    def test_reversed_face_breaks_orientation(self):
        cube = catalog.cube()
        face = cube.faces[2]
        reversed_boundary = tuple(-s for s in reversed(face.boundary))
        report = validate(with_face(cube, face.id, reversed_boundary))
        assert report.condition('boundary_of_boundary').passed
        assert report.condition('two_faces_per_edge').passed is False

    def test_two_tetrahedra(self):
        cycles = TETRA_CYCLES + [tuple(v + 4 for v in c) for c in TETRA_CYCLES]
        report = validate(from_faces(cycles))
        assert report.condition('euler_characteristic').witness == {'chi': 4}
        assert not report.accepted

    def test_require_valid_carries_report(self):
        cycles = TETRA_CYCLES + [tuple(v + 4 for v in c) for c in TETRA_CYCLES]
        with pytest.raises(ValidationError) as info:
            stellate(from_faces(cycles))
        assert info.value.report is not None

    def test_checker(self):
        report = CombinatoricsValidator().run(catalog.octahedron())
        assert report.metrics == {'V': 6, 'E': 12, 'F': 8}


class TestSteinitz:
    def test_cube(self):
        assert is_steinitz(catalog.cube())

    def test_k5(self):
        assert not is_steinitz(nx.complete_graph(5))

    def test_path(self):
        assert not is_steinitz(nx.path_graph(6))

    def test_multigraph_rejected(self):
        g = nx.MultiGraph(nx.complete_graph(4))
        g.add_edge(0, 1)
        assert not is_steinitz(g)

    def test_corpus_and_duals_agree(self, solid):
        assert is_steinitz(solid) == is_steinitz(poincare_dual(solid))


class TestDual:
    def test_cube_to_octahedron(self):
        dual = poincare_dual(catalog.cube())
        assert (dual.V, dual.E, dual.F) == (6, 12, 8)
        assert isomorphic(dual, catalog.octahedron())

    def test_tetrahedron_self_dual(self):
        assert isomorphic(poincare_dual(catalog.tetrahedron()), catalog.tetrahedron())

    def test_involution(self, solid):
        dual = poincare_dual(solid)
        assert validate(dual).accepted
        assert isomorphic(poincare_dual(dual), solid)

    def test_not_isomorphic(self):
        assert not isomorphic(catalog.cube(), catalog.octahedron())
        assert not isomorphic(catalog.triangular_prism(), catalog.square_pyramid())


class TestStellation:
    @pytest.mark.parametrize('name, counts', [('cube', (14, 36, 24)), ('tetrahedron', (8, 18, 12))])
    def test_counts(self, name, counts):
        S = stellate(catalog.CORPUS[name]())
        assert (S.V, S.E, S.F) == counts
        assert S.euler_characteristic == 2

    def test_closed_form(self, solid):
        S = stellate(solid)
        degree_sum = sum(len(f.boundary) for f in solid.faces)
        assert (S.V, S.E, S.F) == (solid.V + solid.F, solid.E + degree_sum, degree_sum)
        assert validate(S).accepted

    def test_all_faces_triangles(self, solid):
        assert all(len(f.boundary) == 3 for f in stellate(solid).faces)

    def test_octahedron_not_inscribable(self):
        possible, reason = stellation_inscribable_necessary(catalog.octahedron())
        assert not possible
        assert 'V = 6' in reason

    def test_cube_not_excluded(self):
        assert stellation_inscribable_necessary(catalog.cube())[0]

    @pytest.mark.parametrize('factory', [catalog.tetrahedron, catalog.octahedron])
    def test_triangulated_solids_fail(self, factory):
        assert not stellation_inscribable_necessary(factory())[0]

    def test_stellated_solids_fail(self, solid):
        # stellations are triangulated with V > 3
        assert not stellation_inscribable_necessary(stellate(solid))[0]

    def test_non_inscribable_choice(self):
        base = non_inscribable_stellation(catalog.cube())
        assert isomorphic(base, catalog.octahedron())
        assert base.V <= base.F


class TestCatalog:
    def test_pentagonal_prism(self):
        P = catalog.prism(5)
        assert (P.V, P.E, P.F) == (10, 15, 7)
        assert validate(P).accepted
        assert is_steinitz(P)

    def test_square_pyramid_is_self_dual(self):
        assert isomorphic(poincare_dual(catalog.square_pyramid()), catalog.square_pyramid())
