"""
Polar duals as spherical cone surfaces.

A ConeMetricSurface is a set of spherical polygons glued side to side. The
Gauss image of a polyhedron has one cell per vertex (the polar of its
link); its cone points correspond to the faces.

Gluing ((c, s), (c', s')) identifies side s of cell c with side s' of c'
in opposite directions: vertex s of c with vertex s'+1 of c', and vertex
s+1 of c with vertex s' of c'.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from ..core.base import (
    GLUING_TOLERANCE,
    STRICT_TOLERANCE,
    BaseChecker,
    Condition,
    InvalidInputError,
    InvalidSurfaceError,
    PreconditionError,
    Report,
    Settings,
    UnsupportedInputError,
)
from ..core.polyhedron import AbstractPolyhedron, Edge, Face
from .combinatorics import is_steinitz
from .geodesics import Certified, GeodesicOutcome, Inconclusive, Refuted, search_closed_geodesics
from .hyperbolic import (
    ConvexPolyhedronH3,
    SphericalPolygon,
    VertexClass,
    dihedral_angle,
    face_angle,
)

logger = logging.getLogger(__name__)

Side = Tuple[int, int]
Gluing = Tuple[Side, Side]


@dataclass(frozen=True)
class ConeMetricSurface:
    cells: Tuple[SphericalPolygon, ...]
    gluings: Tuple[Gluing, ...]
    cell_labels: Optional[Tuple[Any, ...]] = None
    point_labels: Optional[Dict[int, Any]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'cells', tuple(self.cells))
        object.__setattr__(self, 'gluings', tuple(
            ((int(a[0]), int(a[1])), (int(b[0]), int(b[1]))) for a, b in self.gluings))
        tol = GLUING_TOLERANCE

        glued = {}
        for g, (a, b) in enumerate(self.gluings):
            for c, s in (a, b):
                if not (0 <= c < len(self.cells)) or not (0 <= s < len(self.cells[c])):
                    raise InvalidSurfaceError(f"gluing {g} references missing side ({c}, {s})")
                if (c, s) in glued:
                    raise InvalidSurfaceError(f"side ({c}, {s}) is glued twice")
                glued[(c, s)] = g
            if a == b:
                raise InvalidSurfaceError(f"gluing {g} glues side {a} to itself")
            la, lb = self.cells[a[0]].sides[a[1]], self.cells[b[0]].sides[b[1]]
            if abs(la - lb) > tol:
                raise InvalidSurfaceError(f"gluing {g}: side lengths {la} and {lb} differ")
        for c, cell in enumerate(self.cells):
            for s in range(len(cell)):
                if (c, s) not in glued:
                    raise InvalidSurfaceError(f"side ({c}, {s}) is not glued")

    # Structure

    @cached_property
    def _partners(self) -> Dict[Side, Side]:
        out = {}
        for a, b in self.gluings:
            out[a] = b
            out[b] = a
        return out

    def partner(self, c: int, s: int) -> Side:
        return self._partners[(c, s)]

    def gluing_of(self, c: int, s: int) -> int:
        for g, (a, b) in enumerate(self.gluings):
            if (c, s) in (a, b):
                return g
        raise KeyError((c, s))

    @cached_property
    def _classes(self) -> Dict[Side, int]:
        """Corner -> vertex class, numbered by first appearance."""
        parent: Dict[Side, Side] = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[ry] = rx

        for (c, s), (c2, s2) in self.gluings:
            n, n2 = len(self.cells[c]), len(self.cells[c2])
            union((c, s), (c2, (s2 + 1) % n2))
            union((c, (s + 1) % n), (c2, s2))

        numbering: Dict[Side, int] = {}
        classes: Dict[Side, int] = {}
        for c, cell in enumerate(self.cells):
            for i in range(len(cell)):
                root = find((c, i))
                classes[(c, i)] = numbering.setdefault(root, len(numbering))
        return classes

    def vertex_of(self, c: int, i: int) -> int:
        return self._classes[(c, i)]

    @property
    def V(self) -> int:
        return len(set(self._classes.values()))

    @property
    def E(self) -> int:
        return len(self.gluings)

    @property
    def F(self) -> int:
        return len(self.cells)

    @property
    def euler_characteristic(self) -> int:
        return self.V - self.E + self.F

    def corners(self, v: int) -> List[Side]:
        return [corner for corner, cls in self._classes.items() if cls == v]

    def link(self, v: int) -> List[Side]:
        """Corners around v in order; crossing side i-1 of (c, i) leads to the next one."""
        first = min(self.corners(v))
        order = [first]
        c, i = first
        while True:
            n = len(self.cells[c])
            c, i = self.partner(c, (i - 1) % n)
            if (c, i) == first:
                return order
            order.append((c, i))

    def is_disc_link(self, v: int) -> bool:
        return len(self.link(v)) == len(self.corners(v))

    @cached_property
    def _offsets(self) -> Dict[Side, float]:
        offsets = {}
        for v in range(self.V):
            total = 0.0
            for c, i in self.link(v):
                offsets[(c, i)] = total
                total += self.cells[c].angles[i]
        return offsets

    def corner_offset(self, c: int, i: int) -> float:
        """Angular position of corner (c, i) inside the link of its vertex."""
        return self._offsets[(c, i)]

    def cone_angle(self, v: int) -> float:
        return sum(self.cells[c].angles[i] for c, i in self.corners(v))

    def gluing_length(self, g: int) -> float:
        (c, s), _ = self.gluings[g]
        return self.cells[c].sides[s]

    def gluing_ends(self, g: int) -> Tuple[int, int]:
        (c, s), _ = self.gluings[g]
        return self.vertex_of(c, s), self.vertex_of(c, (s + 1) % len(self.cells[c]))

    def combinatorics(self) -> AbstractPolyhedron:
        """Cell complex as an abstract polyhedron: vertices are classes, edges gluings."""
        edges = []
        for g in range(self.E):
            tail, head = self.gluing_ends(g)
            edges.append(Edge(g + 1, tail, head))
        faces = []
        for c, cell in enumerate(self.cells):
            boundary = []
            for s in range(len(cell)):
                g = self.gluing_of(c, s)
                boundary.append(g + 1 if self.gluings[g][0] == (c, s) else -(g + 1))
            faces.append(Face(c, tuple(boundary)))
        return AbstractPolyhedron(tuple(range(self.V)), tuple(edges), tuple(faces))

    def skeleton(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.V))
        for k in range(self.E):
            u, w = self.gluing_ends(k)
            g.add_edge(u, w, gluing=k, length=self.gluing_length(k))
        return g

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'cells': [{'sides': list(c.sides), 'angles': list(c.angles)} for c in self.cells],
            'gluings': [[a[0], a[1], b[0], b[1]] for a, b in self.gluings],
        }
        if self.cell_labels is not None:
            data['labels'] = list(self.cell_labels)
        if self.point_labels is not None:
            data['cone_points'] = {str(v): label for v, label in sorted(self.point_labels.items())}
        return data


# Polar polygons and Gauss images

def spherical_polar_polygon(p: SphericalPolygon) -> SphericalPolygon:
    """Polar polygon: sides pi - angles, angles pi - sides, orientation reversed."""
    if not p.is_convex() or any(s > math.pi for s in p.sides):
        raise InvalidSurfaceError("polar of a non-convex polygon")
    n = len(p)
    sides = tuple(math.pi - p.angles[(-j - 1) % n] for j in range(n))
    angles = tuple(math.pi - p.sides[(-j - 1) % n] for j in range(n))
    return SphericalPolygon(sides, angles)


def polar_surface(P: AbstractPolyhedron,
                  make_cell: Callable[[int, List[Tuple[int, int]]], SphericalPolygon]) -> ConeMetricSurface:
    """One cell per vertex of P, glued across the edges of P.

    Cell vertex i sits on face f_i of the rotation around v and cell side i
    crosses the edge shared by f_i and f_{i+1}.
    """
    cells, labels, position = [], [], {}
    for k, v in enumerate(P.vertices):
        rotation = P.vertex_rotation(v)
        cells.append(make_cell(v, rotation))
        labels.append(v)
        for i, (_, s) in enumerate(rotation):
            position[(v, abs(s))] = (k, i)

    index = {v: k for k, v in enumerate(P.vertices)}
    gluings = []
    for e in P.edges:
        a = position[(e.tail, e.id)]
        b = position[(e.head, e.id)]
        gluings.append((a, b))
    surface = ConeMetricSurface(tuple(cells), tuple(gluings), tuple(labels))

    # cone point of each face
    faces = {}
    for v in P.vertices:
        for i, (f, _) in enumerate(P.vertex_rotation(v)):
            faces[surface.vertex_of(index[v], i)] = f
    return ConeMetricSurface(surface.cells, surface.gluings, surface.cell_labels, faces)


def gauss_image(P: ConvexPolyhedronH3) -> ConeMetricSurface:
    """G(P): side i of cell v is pi - dihedral(e_i), angle i is pi - face_angle(f_i, v)."""
    bad = [v for v, cls in enumerate(P.vertex_class) if cls is VertexClass.HYPERINFINITE]
    if bad:
        raise UnsupportedInputError(f"hyperinfinite vertices {bad} have no polar cell")

    def make_cell(v, rotation):
        sides = [math.pi - dihedral_angle(P, abs(s)) for _, s in rotation]
        angles = [math.pi - face_angle(P, f, v) for f, _ in rotation]
        return SphericalPolygon(tuple(sides), tuple(angles))

    return polar_surface(P.combinatorics, make_cell)


def cone_angles(Q: ConeMetricSurface) -> Dict[int, float]:
    return {v: Q.cone_angle(v) for v in range(Q.V)}


def cone_points(Q: ConeMetricSurface, tol: float = GLUING_TOLERANCE) -> Dict[int, float]:
    """Vertices whose cone angle differs from 2 pi."""
    return {v: a for v, a in cone_angles(Q).items() if abs(a - 2 * math.pi) > tol}


# Admissibility

@dataclass(frozen=True)
class AdmissibilityReport(Report):
    """Report whose geodesic outcome may be inconclusive; that never accepts."""
    geodesics: Optional[GeodesicOutcome] = None

    @property
    def accepted(self) -> bool:
        if isinstance(self.geodesics, Inconclusive):
            return False
        return super().accepted


def _sphere_condition(Q: ConeMetricSurface) -> Condition:
    chi = Q.euler_characteristic
    cell_graph = nx.Graph()
    cell_graph.add_nodes_from(range(Q.F))
    cell_graph.add_edges_from((a[0], b[0]) for a, b in Q.gluings)
    pinched = [v for v in range(Q.V) if not Q.is_disc_link(v)]
    ok = chi == 2 and nx.is_connected(cell_graph) and not pinched
    witness = None
    if not ok:
        witness = {'chi': chi, 'connected': nx.is_connected(cell_graph), 'pinched_vertices': pinched}
    return Condition('sphere', ok, witness)


def _curvature_condition(Q: ConeMetricSurface, tol: float = GLUING_TOLERANCE) -> Condition:
    for c, cell in enumerate(Q.cells):
        if not cell.is_convex():
            return Condition('curvature', False, {'cell': c, 'reason': 'angle above pi'})
        defect = cell.realize()[1]
        if defect > tol:
            return Condition('curvature', False, {'cell': c, 'reason': 'does not close', 'defect': defect})
    return Condition('curvature', True)


def check_admissible(Q: ConeMetricSurface, max_depth: Optional[int] = None, settings: Optional[Settings] = None,
                     progress: bool = False) -> AdmissibilityReport:
    settings = settings or Settings()
    depth = max_depth if max_depth is not None else settings.depth_factor * Q.F
    tol = settings.gluing_tolerance

    conditions = [_sphere_condition(Q), _curvature_condition(Q, tol)]

    angles = cone_angles(Q)
    small = {v: a for v, a in angles.items() if a < 2 * math.pi - tol}
    conditions.append(Condition('cone_angles', not small, {'vertices': small} if small else None))

    outcome: Optional[GeodesicOutcome] = None
    if all(c.passed for c in conditions[:2]):
        outcome = search_closed_geodesics(Q, depth, node_budget=settings.node_budget, progress=progress)
        passed = None if isinstance(outcome, Inconclusive) else isinstance(outcome, Certified)
        witness = None if isinstance(outcome, Certified) else outcome.to_dict()
        conditions.append(Condition('geodesics', passed, witness))
    else:
        conditions.append(Condition('geodesics', None, {'reason': 'surface not spherical'}))

    metrics = {
        'cells': Q.F,
        'depth': depth,
        'cone_angles': angles,
        'geodesics': outcome.to_dict() if outcome is not None else None,
    }
    return AdmissibilityReport(tuple(conditions), metrics, outcome)


def check_ideally_admissible(Q: ConeMetricSurface, tol: float = GLUING_TOLERANCE,
                             strict_tol: float = STRICT_TOLERANCE) -> Report:
    conditions = [_sphere_condition(Q)]

    skeleton = Q.skeleton()
    simple = nx.Graph(skeleton)
    multiple = skeleton.number_of_edges() != simple.number_of_edges() or nx.number_of_selfloops(skeleton) > 0
    steinitz = not multiple and is_steinitz(simple)
    conditions.append(Condition('steinitz', steinitz,
                                None if steinitz else {'reason': 'skeleton not a 3-connected planar simple graph'}))

    not_hemi = [c for c, cell in enumerate(Q.cells)
                if any(abs(a - math.pi) > tol for a in cell.angles) or abs(cell.perimeter - 2 * math.pi) > tol]
    conditions.append(Condition('hemispheres', not not_hemi, {'cells': not_hemi} if not_hemi else None))

    bad_lengths = {g: Q.gluing_length(g) for g in range(Q.E)
                   if not (strict_tol < Q.gluing_length(g) < math.pi - strict_tol)}
    conditions.append(Condition('gluing_lengths', not bad_lengths,
                                {'gluings': bad_lengths} if bad_lengths else None))

    if steinitz:
        facial = {frozenset(Q.vertex_of(c, i) for i in range(len(cell))) for c, cell in enumerate(Q.cells)}
        short = None
        for cycle in nx.simple_cycles(simple):
            if len(cycle) < 3 or frozenset(cycle) in facial:
                continue
            length = sum(simple[u][w]['length'] for u, w in zip(cycle, cycle[1:] + cycle[:1]))
            if length <= 2 * math.pi + strict_tol:
                short = {'cycle': cycle, 'length': length}
                break
        conditions.append(Condition('cycles', short is None, short))
    else:
        conditions.append(Condition('cycles', None))

    return Report(tuple(conditions), {'cells': Q.F, 'longest_gluing': max(Q.gluing_length(g) for g in range(Q.E))})


# Constructions

def t_expansion(Q: ConeMetricSurface, t: float) -> ConeMetricSurface:
    """Split each hemisphere into triangles over its centre and stretch the boundary by 1+t."""
    report = check_ideally_admissible(Q)
    if not report.accepted:
        raise PreconditionError(f"surface is not ideally admissible: {[c.name for c in report.failures()]}")
    e1 = max(Q.gluing_length(g) for g in range(Q.E))
    upper = math.pi / e1 - 1
    if not (0 < t < upper):
        raise PreconditionError(f"t = {t} outside (0, {upper})")

    cells, labels, first = [], [], []
    for c, cell in enumerate(Q.cells):
        first.append(len(cells))
        for j, length in enumerate(cell.sides):
            base = (1 + t) * length
            # vertices v_j, v_{j+1}, centre
            cells.append(SphericalPolygon((base, math.pi / 2, math.pi / 2), (math.pi / 2, math.pi / 2, base)))
            labels.append((Q.cell_labels[c] if Q.cell_labels else c, j))

    gluings = []
    for c, cell in enumerate(Q.cells):
        n = len(cell)
        for j in range(n):
            gluings.append(((first[c] + j, 1), (first[c] + (j + 1) % n, 2)))
    for (c, s), (c2, s2) in Q.gluings:
        gluings.append(((first[c] + s, 0), (first[c2] + s2, 0)))

    surface = ConeMetricSurface(tuple(cells), tuple(gluings), tuple(labels))
    kinds = {}
    for k in range(len(cells)):
        kinds[surface.vertex_of(k, 2)] = 'special'
        kinds.setdefault(surface.vertex_of(k, 0), 'ordinary')
    logger.debug("t-expansion at t=%s: %d cells", t, len(cells))
    return ConeMetricSurface(surface.cells, surface.gluings, surface.cell_labels, kinds)


def expanded_dihedral_angles(Q: ConeMetricSurface, t: float) -> Dict[int, float]:
    """Interior dihedral angles of the polyhedron polar to Q^t, per gluing of Q^t."""
    Qt = t_expansion(Q, t)
    return {g: math.pi - Qt.gluing_length(g) for g in range(Qt.E)}


def suspension_metric(angles: Sequence[float]) -> ConeMetricSurface:
    """Lunes of the given angles glued around two antipodal cone points."""
    if len(angles) < 2:
        raise InvalidInputError("a suspension needs at least two lunes")
    cells = tuple(SphericalPolygon((math.pi, math.pi), (a, a)) for a in angles)
    n = len(cells)
    gluings = tuple(((j, 1), ((j + 1) % n, 0)) for j in range(n))
    return ConeMetricSurface(cells, gluings, point_labels={0: 'north', 1: 'south'})


class AdmissibilityChecker(BaseChecker):
    name = 'check-admissible'

    def __init__(self, settings: Optional[Settings] = None, progress: bool = False,
                 depth: Optional[int] = None):
        super().__init__(settings, progress)
        self.depth = depth

    def run(self, Q: ConeMetricSurface) -> AdmissibilityReport:
        report = check_admissible(Q, self.depth, self.settings, self.progress)
        logger.info("Admissibility: %s (%s)", report.verdict,
                    report.geodesics.kind if report.geodesics is not None else 'not searched')
        return report


class IdealAdmissibilityChecker(BaseChecker):
    name = 'check-ideal'

    def run(self, Q: ConeMetricSurface) -> Report:
        return check_ideally_admissible(Q, self.settings.gluing_tolerance, self.settings.strict_tolerance)


__all__ = [
    'ConeMetricSurface', 'SphericalPolygon', 'AdmissibilityReport',
    'Certified', 'Refuted', 'Inconclusive',
    'spherical_polar_polygon', 'polar_surface', 'gauss_image', 'cone_angles', 'cone_points',
    'check_admissible', 'check_ideally_admissible', 't_expansion', 'expanded_dihedral_angles',
    'suspension_metric', 'AdmissibilityChecker', 'IdealAdmissibilityChecker',
]
