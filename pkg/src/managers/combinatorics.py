import itertools
import logging
from typing import Tuple, Union

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from ..core.base import BaseChecker, Condition, Report, ValidationError
from ..core.polyhedron import AbstractPolyhedron, Edge, Face

logger = logging.getLogger(__name__)


def validate(P: AbstractPolyhedron) -> Report:
    """Check the chain-complex invariants; every failure carries its cell ids."""
    conditions = []

    # d(d(f)) = 0, face by face
    d1, d2 = P.boundary_matrices()
    dd = d1 @ d2
    bad_faces = [P.faces[j].id for j in range(P.F) if dd[:, j].any()]
    conditions.append(Condition('boundary_of_boundary', not bad_faces,
                                {'faces': bad_faces} if bad_faces else None))

    # each edge in exactly two faces, traversed in opposite directions
    bad_edges = []
    for eid, incident in P.edge_faces().items():
        if len(incident) != 2 or incident[0][1] == incident[1][1]:
            bad_edges.append(eid)
    conditions.append(Condition('two_faces_per_edge', not bad_edges,
                                {'edges': bad_edges} if bad_edges else None))

    chi = P.euler_characteristic
    conditions.append(Condition('euler_characteristic', chi == 2,
                                None if chi == 2 else {'chi': chi}))

    steinitz = is_steinitz(P.graph())
    conditions.append(Condition('steinitz', steinitz,
                                None if steinitz else {'reason': 'skeleton not 3-connected planar'}))

    return Report(tuple(conditions), {'V': P.V, 'E': P.E, 'F': P.F})


def require_valid(P: AbstractPolyhedron) -> None:
    report = validate(P)
    if not report.accepted:
        names = ', '.join(c.name for c in report.failures())
        raise ValidationError(f"invalid polyhedron: {names}", report)


def is_steinitz(g: Union[nx.Graph, AbstractPolyhedron]) -> bool:
    """Planar and 3-connected (vertex-pair removal check)."""
    if isinstance(g, AbstractPolyhedron):
        g = g.graph()
    if g.is_directed() or g.is_multigraph() or nx.number_of_selfloops(g) > 0:
        return False
    if g.number_of_nodes() < 4 or not nx.is_connected(g):
        return False

    planar, _ = nx.check_planarity(g)
    if not planar:
        return False

    nodes = list(g.nodes)
    for u, v in itertools.combinations(nodes, 2):
        rest = g.subgraph(n for n in nodes if n != u and n != v)
        if not nx.is_connected(rest):
            return False
    return True


def poincare_dual(P: AbstractPolyhedron) -> AbstractPolyhedron:
    """Faces become vertices, vertices become faces, edges keep their ids.

    The dual edge of e runs from the face traversing +e to the face
    traversing -e.
    """
    require_valid(P)

    sharing = P.edge_faces()
    edges = []
    for e in P.edges:
        plus = next(fid for fid, sign in sharing[e.id] if sign > 0)
        minus = next(fid for fid, sign in sharing[e.id] if sign < 0)
        edges.append(Edge(e.id, plus, minus))

    faces = []
    for v in P.vertices:
        boundary = tuple(s for _, s in P.vertex_rotation(v))
        faces.append(Face(v, boundary))

    return AbstractPolyhedron(tuple(f.id for f in P.faces), tuple(edges), tuple(faces))


def isomorphic(P: AbstractPolyhedron, Q: AbstractPolyhedron) -> bool:
    """Isomorphism of face lattices."""
    if (P.V, P.E, P.F) != (Q.V, Q.E, Q.F):
        return False
    matcher = GraphMatcher(P.incidence_graph(), Q.incidence_graph(),
                           node_match=lambda a, b: a['rank'] == b['rank'])
    return matcher.is_isomorphic()


def stellate(P: AbstractPolyhedron) -> AbstractPolyhedron:
    """Cone every face from a new apex vertex."""
    require_valid(P)

    next_vertex = max(P.vertices) + 1
    next_edge = max(e.id for e in P.edges) + 1
    vertices = list(P.vertices)
    edges = list(P.edges)
    faces = []

    for f in P.faces:
        apex = next_vertex
        next_vertex += 1
        vertices.append(apex)

        ring = P.face_vertices(f.id)
        spokes = []
        for u in ring:
            edges.append(Edge(next_edge, apex, u))
            spokes.append(next_edge)
            next_edge += 1

        k = len(ring)
        for i, s in enumerate(f.boundary):
            # s runs ring[i] -> ring[i+1]; back to the apex and down again
            faces.append(Face(len(faces), (s, -spokes[(i + 1) % k], spokes[i])))

    return AbstractPolyhedron(tuple(vertices), tuple(edges), tuple(faces))


def stellation_inscribable_necessary(P: AbstractPolyhedron) -> Tuple[bool, str]:
    """False when the stellation of P cannot be inscribed (V <= F).

    True only means the criterion does not exclude it.
    """
    require_valid(P)
    if P.V <= P.F:
        return False, f"V = {P.V} <= F = {P.F}: the stellation cannot be inscribed in the sphere"
    return True, f"V = {P.V} > F = {P.F}: not excluded by the vertex/face count"


def non_inscribable_stellation(P: AbstractPolyhedron) -> AbstractPolyhedron:
    """P or its dual, whichever has V <= F; its stellation is never inscribable."""
    require_valid(P)
    if P.V <= P.F:
        return P
    return poincare_dual(P)


class CombinatoricsValidator(BaseChecker):
    """Validates abstract polyhedra and reports the counts."""

    name = 'validate'

    def run(self, P: AbstractPolyhedron) -> Report:
        report = validate(P)
        if report.accepted:
            logger.info("Polyhedron valid: V=%s E=%s F=%s", P.V, P.E, P.F)
        else:
            logger.info("Polyhedron invalid: %s", [c.name for c in report.failures()])
        return report
