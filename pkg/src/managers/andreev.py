"""
Dihedral-angle assignments on trivalent polyhedra with non-obtuse angles.

check_andreev tests the classical conditions on the angles directly;
dual_andreev_metric builds the triangulated polar metric (one spherical
triangle per vertex, sides pi - angle) and check_dual_andreev tests the
dual conditions on it.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Tuple

import networkx as nx
from tqdm import tqdm

from ..core.base import (
    GLUING_TOLERANCE,
    STRICT_TOLERANCE,
    BaseChecker,
    Condition,
    ConstructionError,
    InvalidInputError,
    InvalidTriangleError,
    OutOfScopeError,
    PreconditionError,
    Report,
)
from ..core.minkowski import spherical_angle_from_sides
from ..core.polyhedron import AbstractPolyhedron
from .combinatorics import require_valid
from .hyperbolic import SphericalPolygon
from .polar import ConeMetricSurface, polar_surface

logger = logging.getLogger(__name__)

RIGHT = math.pi / 2


@dataclass(frozen=True)
class AngleAssignment:
    """Interior dihedral angle per edge id, in radians."""
    angles: Mapping[int, float]

    def __post_init__(self):
        clean = {}
        for eid, value in dict(self.angles).items():
            value = float(value)
            if not math.isfinite(value):
                raise InvalidInputError(f"angle of edge {eid} is not finite")
            clean[int(eid)] = value
        object.__setattr__(self, 'angles', clean)

    @classmethod
    def constant(cls, P: AbstractPolyhedron, value: float) -> 'AngleAssignment':
        return cls({e.id: value for e in P.edges})

    def __getitem__(self, edge_id: int) -> float:
        return self.angles[edge_id]

    def check_covers(self, P: AbstractPolyhedron) -> None:
        expected = {e.id for e in P.edges}
        missing = sorted(expected - set(self.angles))
        extra = sorted(set(self.angles) - expected)
        if missing or extra:
            raise InvalidInputError(f"angle assignment mismatch: missing edges {missing}, unknown edges {extra}")


@dataclass(frozen=True)
class PrismaticElement:
    faces: Tuple[int, ...]
    edges: Tuple[int, ...]

    def angle_sum(self, a: AngleAssignment) -> float:
        return sum(a[e] for e in self.edges)


def _canonical(cycle: List[int]) -> Tuple[int, ...]:
    """Rotate to the smallest face and pick the smaller direction."""
    k = cycle.index(min(cycle))
    forward = cycle[k:] + cycle[:k]
    backward = [forward[0]] + forward[1:][::-1]
    return tuple(min(forward, backward))


def prismatic_elements(P: AbstractPolyhedron, k: int, progress: bool = False) -> List[PrismaticElement]:
    """Cyclic k-sequences of edge-adjacent faces, no three sharing a vertex."""
    if k not in (3, 4):
        raise InvalidInputError(f"prismatic elements are enumerated for k = 3 or 4, not {k}")
    require_valid(P)

    graph = P.face_graph()
    corners = {f.id: set(P.face_vertices(f.id)) for f in P.faces}
    found = {}
    cycles = nx.simple_cycles(graph, length_bound=k)
    for cycle in tqdm(cycles, desc=f'{k}-prismatic', disable=not progress):
        if len(cycle) != k:
            continue
        if any(corners[a] & corners[b] & corners[c] for a, b, c in itertools.combinations(cycle, 3)):
            continue
        faces = _canonical(list(cycle))
        if faces in found:
            continue
        edges = tuple(graph[faces[i]][faces[(i + 1) % k]]['edge'] for i in range(k))
        found[faces] = PrismaticElement(faces, edges)
    return [found[key] for key in sorted(found)]


def _vertex_edges(P: AbstractPolyhedron) -> Dict[int, List[int]]:
    out: Dict[int, List[int]] = {v: [] for v in P.vertices}
    for e in P.edges:
        out[e.tail].append(e.id)
        out[e.head].append(e.id)
    return out


def _trivalent(P: AbstractPolyhedron) -> Condition:
    bad = [v for v, edges in _vertex_edges(P).items() if len(edges) != 3]
    return Condition('trivalent', not bad, {'vertices': bad} if bad else None)


def _angle_bounds(P: AbstractPolyhedron, a: AngleAssignment, tol: float) -> Condition:
    bad = {e.id: a[e.id] for e in P.edges if not (0.0 < a[e.id] <= RIGHT + tol)}
    return Condition('angle_bounds', not bad, {'edges': bad} if bad else None)


def check_andreev(P: AbstractPolyhedron, a: AngleAssignment, tol: float = STRICT_TOLERANCE,
                  progress: bool = False) -> Report:
    require_valid(P)
    if P.V == 4 and P.F == 4:
        raise OutOfScopeError("the simplex is not covered by these conditions")
    a.check_covers(P)

    conditions = [_trivalent(P), _angle_bounds(P, a, tol)]

    violations = []
    for v, edges in _vertex_edges(P).items():
        total = sum(a[e] for e in edges)
        if total <= math.pi + tol:
            violations.append({'vertex': v, 'edges': edges, 'sum': total,
                               'boundary': abs(total - math.pi) <= tol})
    conditions.append(Condition('vertex_sums', not violations, violations or None))

    for k, bound, name in ((3, math.pi, 'prismatic_3'), (4, 2 * math.pi, 'prismatic_4')):
        violations = []
        for element in prismatic_elements(P, k, progress):
            total = element.angle_sum(a)
            if total >= bound - tol:
                violations.append({'faces': list(element.faces), 'edges': list(element.edges),
                                   'sum': total, 'boundary': abs(total - bound) <= tol})
        conditions.append(Condition(name, not violations, violations or None))

    if conditions[0].passed and conditions[1].passed and conditions[2].passed:
        Q = dual_andreev_metric(P, a)
        stars = _quadrilateral_stars(Q)
        conditions.append(Condition('forbidden_configuration', not stars,
                                    {'faces': [Q.point_labels[v] for v in stars]} if stars else None))
    else:
        conditions.append(Condition('forbidden_configuration', None))

    report = Report(tuple(conditions), {'V': P.V, 'E': P.E, 'F': P.F})
    logger.info("Andreev check: %s", report.verdict)
    return report


def dual_andreev_metric(P: AbstractPolyhedron, a: AngleAssignment, tol: float = STRICT_TOLERANCE) -> ConeMetricSurface:
    """One spherical triangle per vertex of P with sides pi - angle."""
    require_valid(P)
    a.check_covers(P)
    for condition in (_trivalent(P), _angle_bounds(P, a, tol)):
        if not condition.passed:
            raise PreconditionError(f"condition '{condition.name}' fails: {condition.witness}")

    def make_cell(v, rotation):
        sides = [math.pi - a[abs(s)] for _, s in rotation]
        try:
            angles = [spherical_angle_from_sides(sides[(i + 1) % 3], sides[i], sides[i - 1]) for i in range(3)]
        except InvalidTriangleError as e:
            raise ConstructionError(f"no spherical triangle at vertex {v}: {e}", {'vertex': v})
        return SphericalPolygon(tuple(sides), tuple(angles))

    return polar_surface(P, make_cell)


def _edge_slots(Q: ConeMetricSurface, v: int) -> Dict[int, int]:
    """Gluing -> slot in the link of v; slot k lies between corners k and k+1."""
    slots = {}
    for k, (c, i) in enumerate(Q.link(v)):
        g = Q.gluing_of(c, (i - 1) % len(Q.cells[c]))
        slots.setdefault(g, k)
    return slots


def _is_geodesic_cycle(Q: ConeMetricSurface, vertices: List[int], gluings: List[int]) -> bool:
    """Geodesic unless a vertex on it has a single triangle on one side."""
    for j, v in enumerate(vertices):
        slots = _edge_slots(Q, v)
        degree = len(Q.link(v))
        before, after = gluings[j - 1], gluings[j]
        gap = (slots[after] - slots[before]) % degree
        if gap == 1 or degree - gap == 1:
            return False
    return True


def _short_cycles(Q: ConeMetricSurface) -> List[Tuple[List[int], List[int]]]:
    """Simple 1-skeleton cycles of 3 or 4 edges as (vertices, gluings)."""
    adjacency: Dict[int, List[Tuple[int, int]]] = {v: [] for v in range(Q.V)}
    for g in range(Q.E):
        u, w = Q.gluing_ends(g)
        adjacency[u].append((w, g))
        adjacency[w].append((u, g))

    seen = set()
    cycles = []

    def walk(path, used):
        for w, g in adjacency[path[-1]]:
            if g in used:
                continue
            if w == path[0] and len(used) >= 2:
                key = frozenset(used + [g])
                if key not in seen:
                    seen.add(key)
                    cycles.append((list(path), used + [g]))
            elif w not in path and len(used) < 3:
                walk(path + [w], used + [g])

    for v in range(Q.V):
        walk([v], [])
    return cycles


def _quadrilateral_stars(Q: ConeMetricSurface, tol: float = GLUING_TOLERANCE) -> List[int]:
    """Vertices surrounded by exactly four triangles whose opposite sides are pi/2."""
    stars = []
    for v in range(Q.V):
        corners = Q.corners(v)
        if len(corners) != 4:
            continue
        if all(len(Q.cells[c]) == 3 and abs(Q.cells[c].sides[(i + 1) % 3] - RIGHT) <= tol for c, i in corners):
            stars.append(v)
    return stars


def check_dual_andreev(Q: ConeMetricSurface, tol: float = GLUING_TOLERANCE,
                       strict_tol: float = STRICT_TOLERANCE) -> Report:
    conditions = []

    bad_cells: List[Dict[str, Any]] = []
    for c, cell in enumerate(Q.cells):
        if len(cell) != 3:
            bad_cells.append({'cell': c, 'reason': 'not a triangle'})
        elif any(not (RIGHT - tol <= s < math.pi - strict_tol) for s in cell.sides):
            bad_cells.append({'cell': c, 'reason': 'side outside [pi/2, pi)'})
        elif cell.perimeter >= 2 * math.pi - strict_tol:
            bad_cells.append({'cell': c, 'reason': 'perimeter not below 2 pi'})
        elif cell.realize()[1] > tol:
            bad_cells.append({'cell': c, 'reason': 'sides and angles inconsistent'})
    conditions.append(Condition('triangulation', not bad_cells, bad_cells or None))

    if bad_cells:
        conditions.append(Condition('short_geodesics', None))
    else:
        short = []
        for vertices, gluings in _short_cycles(Q):
            length = sum(Q.gluing_length(g) for g in gluings)
            if length <= 2 * math.pi + strict_tol and _is_geodesic_cycle(Q, vertices, gluings):
                short.append({'vertices': vertices, 'gluings': gluings, 'length': length,
                              'boundary': abs(length - 2 * math.pi) <= strict_tol})
        conditions.append(Condition('short_geodesics', not short, short or None))

    stars = _quadrilateral_stars(Q, tol)
    conditions.append(Condition('quadrilateral_stars', not stars, {'vertices': stars} if stars else None))

    return Report(tuple(conditions), {'cells': Q.F, 'cone_points': Q.V})


class AndreevChecker(BaseChecker):
    """Checks an angle assignment and, when accepted, its dual metric."""

    name = 'check-andreev'

    def run(self, P: AbstractPolyhedron, a: AngleAssignment) -> Report:
        report = check_andreev(P, a, self.settings.strict_tolerance, self.progress)
        if not report.accepted:
            return report
        dual = check_dual_andreev(dual_andreev_metric(P, a), self.settings.gluing_tolerance,
                                  self.settings.strict_tolerance)
        metrics = dict(report.metrics or {})
        metrics['dual'] = dual.to_dict()
        return Report(report.conditions, metrics)
