"""
Convex polyhedra in H^3 cut out by half-spaces {x : <x,n> <= 0}.

Work happens in the Klein chart: the half-space of n is {a : a.n_vec <= n0}.
Vertices come from every triple of planes whose intersection satisfies all
the inequalities, so they may lie inside the ball (finite), on the sphere
at infinity (ideal) or beyond it (hyperinfinite).
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.optimize import LinearConstraint, linprog, minimize

from ..core.base import (
    IDEAL_TOLERANCE,
    BaseChecker,
    Condition,
    DegenerateCurveError,
    DegeneratePolyhedronError,
    InvalidInputError,
    NoDihedralError,
    NonCompactError,
    Report,
)
from ..core.conversions import from_klein
from ..core.minkowski import (
    hyperbolic_angle,
    hyperbolic_distance,
    minkowski_inner,
)
from ..core.models import DSPoint, HPoint
from ..core.polyhedron import AbstractPolyhedron, from_faces
from .combinatorics import validate

logger = logging.getLogger(__name__)

FEASIBILITY_TOLERANCE = 1e-9


class VertexClass(str, Enum):
    FINITE = 'finite'
    IDEAL = 'ideal'
    HYPERINFINITE = 'hyperinfinite'


@dataclass(frozen=True)
class HalfSpace:
    """{x in H^3 : <x,n> <= 0} with outward unit normal n."""
    n: DSPoint

    @classmethod
    def of(cls, n0: float, n1: float, n2: float, n3: float) -> 'HalfSpace':
        return cls(DSPoint.normalize([n0, n1, n2, n3]))

    def contains_klein(self, a, tol: float = FEASIBILITY_TOLERANCE) -> bool:
        return float(np.asarray(a) @ self.n.x) - self.n.x0 <= tol


@dataclass(frozen=True)
class SphericalPolygon:
    """Convex polygon on the unit sphere given intrinsically.

    Side i joins vertex i to vertex i+1; angle i sits at vertex i, between
    side i-1 and side i. Vertices run counterclockwise seen from outside.
    """
    sides: Tuple[float, ...]
    angles: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, 'sides', tuple(float(s) for s in self.sides))
        object.__setattr__(self, 'angles', tuple(float(a) for a in self.angles))
        if len(self.sides) != len(self.angles) or len(self.sides) < 2:
            raise InvalidInputError("a spherical polygon needs matching side/angle lists of length >= 2")
        for s in self.sides:
            if not (0.0 < s <= math.pi + 1e-12):
                raise InvalidInputError(f"side {s} outside (0, pi]")
        for a in self.angles:
            if not (0.0 < a < 2 * math.pi):
                raise InvalidInputError(f"angle {a} outside (0, 2pi)")

    def __len__(self) -> int:
        return len(self.sides)

    @property
    def perimeter(self) -> float:
        return sum(self.sides)

    @property
    def area(self) -> float:
        """Gauss-Bonnet: sum of angles - (n - 2) pi."""
        return sum(self.angles) - (len(self) - 2) * math.pi

    def is_convex(self, tol: float = 1e-12) -> bool:
        return all(a <= math.pi + tol for a in self.angles)

    def realize(self, start=None) -> Tuple[np.ndarray, float]:
        """Develop the polygon on the unit sphere.

        Returns the (n, 3) vertex array and the closing defect (distance
        between the frame after a full walk and the initial frame).
        """
        p = np.array([0.0, 0.0, 1.0]) if start is None else np.asarray(start[0], float)
        t = np.array([1.0, 0.0, 0.0]) if start is None else np.asarray(start[1], float)
        p0, t0 = p.copy(), t.copy()
        verts = []
        n = len(self)
        for i in range(n):
            verts.append(p)
            s = self.sides[i]
            p, t = math.cos(s) * p + math.sin(s) * t, -math.sin(s) * p + math.cos(s) * t
            # turn left by the exterior angle at the next vertex
            ext = math.pi - self.angles[(i + 1) % n]
            t = math.cos(ext) * t + math.sin(ext) * np.cross(p, t)
        defect = float(max(np.max(np.abs(p - p0)), np.max(np.abs(t - t0))))
        return np.array(verts), defect

    def is_consistent(self, tol: float = 1e-9) -> bool:
        return self.realize()[1] <= tol

    def rotated(self, k: int) -> 'SphericalPolygon':
        k %= len(self)
        return SphericalPolygon(self.sides[k:] + self.sides[:k], self.angles[k:] + self.angles[:k])

    def reversed(self) -> 'SphericalPolygon':
        # mirror image: vertex j -> -j, side j -> side -j-1
        n = len(self)
        return SphericalPolygon(tuple(self.sides[(-j - 1) % n] for j in range(n)),
                                tuple(self.angles[(-j) % n] for j in range(n)))

    def congruent_to(self, other: 'SphericalPolygon', tol: float = 1e-9) -> bool:
        """Equal up to cyclic relabelling and reflection."""
        if len(self) != len(other):
            return False
        for candidate in (other, other.reversed()):
            for k in range(len(self)):
                r = candidate.rotated(k)
                if (np.allclose(self.sides, r.sides, atol=tol, rtol=0)
                        and np.allclose(self.angles, r.angles, atol=tol, rtol=0)):
                    return True
        return False


@dataclass
class ConvexPolyhedronH3:
    """Half-spaces plus the derived combinatorics and Klein vertex coordinates.

    Face ids are the indices of the non-redundant half-spaces; vertex ids
    index `vertex_coords`.
    """
    halfspaces: Tuple[HalfSpace, ...]
    combinatorics: AbstractPolyhedron
    vertex_coords: np.ndarray
    vertex_class: Tuple[VertexClass, ...]
    notes: List[str] = field(default_factory=list)

    @property
    def is_compact(self) -> bool:
        return all(c is VertexClass.FINITE for c in self.vertex_class)

    @property
    def is_ideal(self) -> bool:
        return all(c is VertexClass.IDEAL for c in self.vertex_class)

    def normal(self, face_id: int) -> DSPoint:
        return self.halfspaces[face_id].n

    def point(self, v: int) -> HPoint:
        """Hyperboloid point of a finite vertex."""
        if self.vertex_class[v] is not VertexClass.FINITE:
            raise NonCompactError(f"vertex {v} is {self.vertex_class[v].value}")
        return from_klein(self.vertex_coords[v])

    def projective(self, v: int) -> np.ndarray:
        """(1, a): the vertex as a projective vector, defined for every class."""
        return np.concatenate(([1.0], self.vertex_coords[v]))

    def edge_faces(self, edge_id: int) -> Tuple[int, int]:
        incident = self.combinatorics.edge_faces()[edge_id]
        return incident[0][0], incident[1][0]

    def metrics(self) -> Dict:
        """Vertex classes, incidence and metric tables for reports."""
        P = self.combinatorics
        edges = []
        for e in P.edges:
            entry = {'id': e.id, 'tail': e.tail, 'head': e.head, 'length': edge_length(self, e.id)}
            try:
                entry['dihedral'] = dihedral_angle(self, e.id)
            except NoDihedralError:
                entry['dihedral'] = None
            edges.append(entry)
        faces = []
        for f in P.faces:
            entry = {'id': f.id, 'vertices': P.face_vertices(f.id)}
            if all(self.vertex_class[v] is VertexClass.FINITE for v in entry['vertices']):
                entry['area'] = face_area(self, f.id)
            faces.append(entry)
        return {
            'vertices': [
                {'id': i, 'klein': self.vertex_coords[i].tolist(), 'class': self.vertex_class[i].value}
                for i in range(len(self.vertex_class))
            ],
            'edges': edges,
            'faces': faces,
            'notes': list(self.notes),
        }


def classify(a: np.ndarray, tol: float = IDEAL_TOLERANCE) -> VertexClass:
    r = float(np.linalg.norm(a))
    if r < 1.0 - tol:
        return VertexClass.FINITE
    if r <= 1.0 + tol:
        return VertexClass.IDEAL
    return VertexClass.HYPERINFINITE


def _interior_ball(normals: np.ndarray) -> Tuple[np.ndarray, float]:
    """Centre and radius of the largest ball inside the Klein-chart polytope clipped to [-1,1]^3."""
    A = normals[:, 1:]
    b = normals[:, 0]
    norms = np.linalg.norm(A, axis=1)
    A_ub = np.hstack([A, norms[:, None]])
    # maximize r over (a, r)
    res = linprog(c=[0, 0, 0, -1], A_ub=A_ub, b_ub=b,
                  bounds=[(-1, 1), (-1, 1), (-1, 1), (0, None)], method='highs')
    if not res.success:
        return np.zeros(3), 0.0
    return res.x[:3], float(res.x[3])


def _closest_to_origin(normals: np.ndarray, start: np.ndarray) -> float:
    """Smallest Euclidean norm of a point of the Klein-chart polytope."""
    constraint = LinearConstraint(normals[:, 1:], -np.inf, normals[:, 0])
    res = minimize(lambda a: a @ a, start, jac=lambda a: 2 * a, constraints=[constraint], method='SLSQP')
    if not res.success:
        logger.warning("closest point search did not converge: %s", res.message)
        return float(np.linalg.norm(start))
    return float(np.linalg.norm(res.x))


def _order_face(points: np.ndarray, normal: np.ndarray) -> List[int]:
    """Indices of coplanar points sorted counterclockwise about `normal`."""
    center = points.mean(axis=0)
    u = points[0] - center
    u /= np.linalg.norm(u)
    w = np.cross(normal, u)
    angles = [math.atan2(float((p - center) @ w), float((p - center) @ u)) for p in points]
    return sorted(range(len(points)), key=lambda i: angles[i])


def build_from_halfspaces(hs: Sequence[HalfSpace], ideal_tol: float = IDEAL_TOLERANCE,
                          tol: float = FEASIBILITY_TOLERANCE) -> ConvexPolyhedronH3:
    hs = tuple(hs)
    if len(hs) < 4:
        raise DegeneratePolyhedronError(f"need at least 4 half-spaces, got {len(hs)}")
    N = np.array([h.n.coords for h in hs])
    m = len(hs)

    center, radius = _interior_ball(N)
    if radius <= 1e-9:
        raise DegeneratePolyhedronError("half-space intersection is empty or lower-dimensional")
    nearest = _closest_to_origin(N, center)
    if nearest >= 1.0 - ideal_tol:
        raise DegeneratePolyhedronError(f"half-space intersection misses H^3 (closest point at |a| = {nearest:.6f})")

    notes: List[str] = []
    points: List[np.ndarray] = []
    for i, j, k in itertools.combinations(range(m), 3):
        M = N[[i, j, k], 1:]
        rhs = N[[i, j, k], 0]
        if abs(np.linalg.det(M)) < 1e-12:
            # planes meet at projective infinity; unbounded if the common direction is feasible
            _, _, vt = np.linalg.svd(M)
            d = vt[-1]
            for direction in (d, -d):
                if np.all(N[:, 1:] @ direction <= tol):
                    note = f"planes {i}, {j}, {k} meet at projective infinity inside the region"
                    if note not in notes:
                        notes.append(note)
                        logger.warning(note)
            continue
        a = np.linalg.solve(M, rhs)
        if np.all(N[:, 1:] @ a - N[:, 0] <= tol):
            if not any(np.allclose(a, q, atol=1e-9, rtol=0) for q in points):
                points.append(a)

    if len(points) < 4:
        raise DegeneratePolyhedronError(f"only {len(points)} vertices found")

    # incidence: which planes pass through each vertex
    P = np.array(points)
    residual = np.abs(P @ N[:, 1:].T - N[:, 0][None, :])
    on_plane = residual <= 1e-8

    cycles, face_ids = [], []
    for f in range(m):
        members = np.flatnonzero(on_plane[:, f])
        if len(members) < 3:
            continue
        order = _order_face(P[members], N[f, 1:])
        cycles.append([int(members[i]) for i in order])
        face_ids.append(f)

    combinatorics = from_faces(cycles, face_ids)
    # vertices that lie on no face are impossible; keep ids aligned with P
    if list(combinatorics.vertices) != list(range(len(P))):
        raise DegeneratePolyhedronError("vertex set does not match face incidences")
    report = validate(combinatorics)
    if not report.accepted:
        raise DegeneratePolyhedronError(
            f"extracted combinatorics invalid: {[c.name for c in report.failures()]}")

    classes = tuple(classify(a, ideal_tol) for a in P)

    P.setflags(write=False)
    logger.debug("Built polyhedron: %d vertices, %d faces (%s)", len(P), len(face_ids),
                 {c.value: classes.count(c) for c in VertexClass})
    return ConvexPolyhedronH3(hs, combinatorics, P, classes, notes)


def dihedral_angle(P: ConvexPolyhedronH3, edge_id: int) -> float:
    """Interior angle: cos(theta) = -<n1, n2>."""
    f1, f2 = P.edge_faces(edge_id)
    c = -minkowski_inner(P.normal(f1), P.normal(f2))
    if abs(c) >= 1.0:
        raise NoDihedralError(f"faces {f1} and {f2} of edge {edge_id} do not intersect in H^3")
    return math.acos(c)


def exterior_dihedral_angle(P: ConvexPolyhedronH3, edge_id: int) -> float:
    return math.pi - dihedral_angle(P, edge_id)


def edge_length(P: ConvexPolyhedronH3, edge_id: int) -> float:
    """arccosh(-<v1,v2>); inf with an ideal endpoint, nan with a hyperinfinite one."""
    e = P.combinatorics.edge(edge_id)
    classes = (P.vertex_class[e.tail], P.vertex_class[e.head])
    if VertexClass.HYPERINFINITE in classes:
        logger.warning("Edge %s has a hyperinfinite endpoint; length undefined", edge_id)
        return math.nan
    if VertexClass.IDEAL in classes:
        return math.inf
    return hyperbolic_distance(P.point(e.tail), P.point(e.head))


def face_angle(P: ConvexPolyhedronH3, face_id: int, vertex: int) -> float:
    """Angle of the face at the vertex; 0 at an ideal vertex."""
    cls = P.vertex_class[vertex]
    if cls is VertexClass.HYPERINFINITE:
        raise NonCompactError(f"vertex {vertex} is hyperinfinite")
    if cls is VertexClass.IDEAL:
        return 0.0
    ring = P.combinatorics.face_vertices(face_id)
    if vertex not in ring:
        raise InvalidInputError(f"vertex {vertex} is not on face {face_id}")
    i = ring.index(vertex)
    prev, nxt = ring[i - 1], ring[(i + 1) % len(ring)]
    return hyperbolic_angle(P.point(vertex), P.projective(prev), P.projective(nxt))


def face_area(P: ConvexPolyhedronH3, face_id: int) -> float:
    """Angle defect: sum(pi - theta_i) - 2 pi."""
    ring = P.combinatorics.face_vertices(face_id)
    if any(P.vertex_class[v] is not VertexClass.FINITE for v in ring):
        raise NonCompactError(f"face {face_id} is not compact")
    return sum(math.pi - face_angle(P, face_id, v) for v in ring) - 2 * math.pi


def vertex_link(P: ConvexPolyhedronH3, vertex: int) -> SphericalPolygon:
    """Link of a finite vertex: sides are face angles, angles are dihedral angles.

    With the faces f_0..f_{k-1} around v and e_j shared by f_j and f_{j+1},
    link vertex j is e_j and link side j lies in f_{j+1}.
    """
    if P.vertex_class[vertex] is not VertexClass.FINITE:
        raise NonCompactError(f"vertex {vertex} is {P.vertex_class[vertex].value}")
    rotation = P.combinatorics.vertex_rotation(vertex)
    k = len(rotation)
    sides = [face_angle(P, rotation[(j + 1) % k][0], vertex) for j in range(k)]
    angles = [dihedral_angle(P, abs(rotation[j][1])) for j in range(k)]
    return SphericalPolygon(tuple(sides), tuple(angles))


def is_geodesic_curve(curve: Sequence[HPoint], tol: float = 1e-9) -> bool:
    """True when every point lies on one geodesic (rank <= 2 in E^3_1)."""
    M = np.array([p.coords for p in curve])
    s = np.linalg.svd(M, compute_uv=False)
    return bool(len(s) < 3 or s[2] <= tol * s[0])


def total_turning(curve: Sequence[HPoint], tol: float = 1e-12) -> float:
    """Sum of exterior angles of a closed polygonal curve."""
    n = len(curve)
    if n < 3:
        raise DegenerateCurveError(f"a closed curve needs >= 3 vertices, got {n}")
    for i in range(n):
        if hyperbolic_distance(curve[i], curve[(i + 1) % n]) <= tol:
            raise DegenerateCurveError(f"consecutive points {i} and {(i + 1) % n} coincide")
    if is_geodesic_curve(curve):
        logger.warning("Curve lies on a single geodesic; turning is degenerate")
    return sum(math.pi - hyperbolic_angle(curve[i], curve[i - 1], curve[(i + 1) % n])
               for i in range(n))


class PolyhedronBuilder(BaseChecker):
    """Builds a polyhedron from half-spaces and reports its geometry."""

    name = 'build-h3'

    def run(self, hs: Sequence[HalfSpace]) -> Report:
        P = build_from_halfspaces(hs, ideal_tol=self.settings.ideal_tolerance)
        conditions = [
            Condition('combinatorics', True),
            Condition('bounded', not P.notes, {'notes': P.notes} if P.notes else None),
        ]
        metrics = P.metrics()
        metrics['summary'] = {c.value: P.vertex_class.count(c) for c in VertexClass}
        return Report(tuple(conditions), metrics)
