"""
The Pogorelov map and hyperbolic prism pairs with equal edge lengths.

phi(x, y) = (2x/(x0 + y0), 2y/(x0 + y0)) sends pairs of hyperboloid points
to pairs of points of R^3. A pair (x, Ax) with A a Lorentz transform goes to
a pair (y, By) with B a Euclidean isometry, so pulling back two Euclidean
prisms with the same edge lengths gives two hyperbolic prisms with the same
edge lengths.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
from networkx.algorithms.isomorphism import GraphMatcher

from ..core.base import (
    CONGRUENCE_TOLERANCE,
    PLANARITY_TOLERANCE,
    BaseChecker,
    Condition,
    ConstructionError,
    InternalError,
    InvalidTransformError,
    NonCompactError,
    NonConvexError,
    OutsideDomainError,
    PreconditionError,
    Report,
    Settings,
)
from ..core.minkowski import eta_defect, lorentz_from_frames, minkowski_inner
from ..core.models import ETA, DSPoint, EuclideanIsometry, HPoint, LorentzTransform, as_coords
from ..core.polyhedron import AbstractPolyhedron, from_faces
from .hyperbolic import ConvexPolyhedronH3, HalfSpace, build_from_halfspaces, dihedral_angle, edge_length

logger = logging.getLogger(__name__)

# outward-oriented vertex cycles of the prism
PRISM_FACES = ((0, 2, 3), (1, 5, 4), (0, 1, 4, 2), (0, 3, 5, 1), (2, 4, 5, 3))


def phi(x: HPoint, y: HPoint) -> Tuple[np.ndarray, np.ndarray]:
    s = x.x0 + y.x0
    return 2.0 * x.x / s, 2.0 * y.x / s


def phi_inverse(a, b) -> Tuple[HPoint, HPoint]:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    A, B = float(a @ a), float(b @ b)
    f = (A - B) ** 2 - 8.0 * (A + B - 2.0)
    if f <= 0 or 4.0 + A - B <= 0 or 4.0 + B - A <= 0:
        raise OutsideDomainError(f"({a.tolist()}, {b.tolist()}) is outside the image of phi (f = {f})")
    r = math.sqrt(f)
    x = np.concatenate(([4.0 + A - B], 4.0 * a)) / r
    y = np.concatenate(([4.0 + B - A], 4.0 * b)) / r
    return HPoint(x), HPoint(y)


def induced_isometry(A) -> EuclideanIsometry:
    """B with phi(x, Ax) = (y, B y) for every x."""
    m = A.m if isinstance(A, LorentzTransform) else np.asarray(A, dtype=float)
    a00 = m[0, 0]
    if a00 < 1.0:
        raise InvalidTransformError(f"A00 = {a00} < 1")
    D = 2.0 * m[1:, 0] / (1.0 + a00)
    R = m[1:, 1:] - np.outer(m[1:, 0], m[0, 1:]) / (1.0 + a00)
    return EuclideanIsometry(D, R)


@dataclass(frozen=True)
class PrismParams:
    """Triangular prism with edge lengths a (vertical), b and c, sheared by u."""
    a: float
    b: float
    c: float
    u: float = 0.0

    def __post_init__(self):
        if min(self.a, self.b, self.c) <= 0:
            raise PreconditionError(f"edge lengths must be positive: {self}")
        if self.b ** 2 - self.c ** 2 / 4 - self.u ** 2 <= 0:
            raise PreconditionError(f"u = {self.u} too large for b = {self.b}, c = {self.c}")
        radius = float(np.max(np.linalg.norm(self.vertices(), axis=1)))
        if radius >= 1.0:
            raise PreconditionError(f"prism leaves the unit ball (radius {radius})")

    @property
    def depth(self) -> float:
        return math.sqrt(self.b ** 2 - self.c ** 2 / 4 - self.u ** 2)

    def vertices(self) -> np.ndarray:
        a, c, u, w = self.a, self.c, self.u, self.depth
        return np.array([
            [0.0, 0.0, 0.0],
            [0.0, 0.0, a],
            [w, c / 2, u],
            [w, -c / 2, u],
            [w, c / 2, u + a],
            [w, -c / 2, u + a],
        ])


@dataclass(frozen=True, eq=False)
class EuclideanPrism:
    params: PrismParams
    vertices: np.ndarray
    combinatorics: AbstractPolyhedron

    def edge_lengths(self) -> Dict[int, float]:
        return {e.id: float(np.linalg.norm(self.vertices[e.head] - self.vertices[e.tail]))
                for e in self.combinatorics.edges}


def prism_euclidean(p: PrismParams) -> EuclideanPrism:
    V = p.vertices()
    V.setflags(write=False)
    return EuclideanPrism(p, V, from_faces(PRISM_FACES))


def fit_euclidean_plane(points) -> Tuple[np.ndarray, float, float]:
    """Least-squares plane n.x = d through the points; returns (n, d, residual)."""
    P = np.asarray(points, dtype=float)
    center = P.mean(axis=0)
    _, s, vt = np.linalg.svd(P - center)
    n = vt[-1]
    residual = float(np.max(np.abs((P - center) @ n)))
    return n, float(n @ center), residual


def fit_hyperbolic_plane(points: Sequence[HPoint]) -> Tuple[DSPoint, float]:
    """Plane <x, n> = 0 through the points; residual is max |<x_i, n>|."""
    X = np.array([as_coords(p) for p in points])
    _, _, vt = np.linalg.svd(X @ ETA)
    n = vt[-1]
    if minkowski_inner(n, n) <= 0:
        raise ConstructionError("points do not span a hyperbolic plane", {'points': X.tolist()})
    n = DSPoint.normalize(n)
    residual = max(abs(minkowski_inner(p, n)) for p in points)
    return n, residual


def euclidean_dihedral_angles(prism: EuclideanPrism) -> Dict[int, float]:
    """Interior dihedral angle per edge, from the outward face normals."""
    P = prism.combinatorics
    normals = {}
    for f in P.faces:
        ring = prism.vertices[P.face_vertices(f.id)]
        n = np.cross(ring[1] - ring[0], ring[2] - ring[0])
        normals[f.id] = n / np.linalg.norm(n)
    angles = {}
    for eid, incident in P.edge_faces().items():
        (f1, _), (f2, _) = incident
        c = float(np.clip(normals[f1] @ normals[f2], -1.0, 1.0))
        angles[eid] = math.pi - math.acos(c)
    return angles


def _pull_back(prism: EuclideanPrism, points: List[HPoint], name: str,
               planarity_tol: float) -> ConvexPolyhedronH3:
    P = prism.combinatorics
    center = HPoint.normalize(np.sum([p.coords for p in points], axis=0))
    halfspaces = []
    for f in P.faces:
        ring = [points[v] for v in P.face_vertices(f.id)]
        n, residual = fit_hyperbolic_plane(ring)
        if residual > planarity_tol:
            raise ConstructionError(f"face {f.id} of {name} is not planar (residual {residual:.3e})",
                                    {'polyhedron': name, 'face': f.id, 'residual': residual})
        if minkowski_inner(center, n) > 0:
            n = DSPoint(-n.coords)
        halfspaces.append(HalfSpace(n))

    for f, h in zip(P.faces, halfspaces):
        for v, x in enumerate(points):
            if minkowski_inner(x, h.n) > planarity_tol:
                raise NonConvexError(f"vertex {v} of {name} lies outside face {f.id}",
                                     {'polyhedron': name, 'vertex': v, 'face': f.id})

    poly = build_from_halfspaces(halfspaces)
    if poly.combinatorics.V != P.V or not poly.is_compact:
        raise NonConvexError(f"{name} is not a compact prism", {'polyhedron': name})
    return poly


def counterexample_pair(a: float, b: float, c: float, u: float, v: float,
                        planarity_tol: float = PLANARITY_TOLERANCE,
                        tol: float = CONGRUENCE_TOLERANCE) -> Tuple[ConvexPolyhedronH3, ConvexPolyhedronH3]:
    """Pull back the prisms sheared by u and v through phi."""
    prism_u = prism_euclidean(PrismParams(a, b, c, u))
    prism_v = prism_euclidean(PrismParams(a, b, c, v))

    pairs = [phi_inverse(y, y2) for y, y2 in zip(prism_u.vertices, prism_v.vertices)]
    first = [x for x, _ in pairs]
    second = [x2 for _, x2 in pairs]
    F = _pull_back(prism_u, first, 'F', planarity_tol)
    F_prime = _pull_back(prism_v, second, "F'", planarity_tol)

    if u != v and are_congruent(F, F_prime, tol):
        raise InternalError(f"prisms at u = {u} and v = {v} pulled back to congruent polyhedra")
    logger.debug("Built prism pair for (a, b, c) = (%s, %s, %s), u = %s, v = %s", a, b, c, u, v)
    return F, F_prime


def _independent_vertices(X: np.ndarray) -> List[int]:
    chosen: List[int] = []
    for i in range(len(X)):
        if np.linalg.matrix_rank(X[chosen + [i]], tol=1e-12) == len(chosen) + 1:
            chosen.append(i)
        if len(chosen) == 4:
            return chosen
    return chosen


def are_congruent(P1: ConvexPolyhedronH3, P2: ConvexPolyhedronH3, tol: float = CONGRUENCE_TOLERANCE) -> bool:
    """True if some skeleton isomorphism extends to an isometry of H^3 (reflections included)."""
    if not (P1.is_compact and P2.is_compact):
        raise NonCompactError("congruence is decided for compact polyhedra only")
    C1, C2 = P1.combinatorics, P2.combinatorics
    if (C1.V, C1.E, C1.F) != (C2.V, C2.E, C2.F):
        return False

    X1 = np.array([P1.point(v).coords for v in C1.vertices])
    X2 = {v: P2.point(v).coords for v in C2.vertices}
    index1 = {v: k for k, v in enumerate(C1.vertices)}
    frame = _independent_vertices(X1)
    if len(frame) < 4:
        return False
    source = X1[frame].T

    for mapping in GraphMatcher(C1.graph(), C2.graph()).isomorphisms_iter():
        target = np.column_stack([X2[mapping[C1.vertices[k]]] for k in frame])
        A = lorentz_from_frames(source, target)
        if eta_defect(A) > max(1e-6, tol) or A[0, 0] < 1.0 - 1e-6:
            continue
        if all(np.max(np.abs(A @ X1[index1[v]] - X2[w])) <= tol for v, w in mapping.items()):
            return True
    return False


def _spectrum(values) -> List[float]:
    return sorted(float(x) for x in values)


def compare_pair(F: ConvexPolyhedronH3, F_prime: ConvexPolyhedronH3, tol: float = 1e-10) -> Report:
    """Edge-length and dihedral spectra of a pair, plus the congruence verdict."""
    lengths = [_spectrum(edge_length(P, e.id) for e in P.combinatorics.edges) for P in (F, F_prime)]
    dihedrals = [_spectrum(dihedral_angle(P, e.id) for e in P.combinatorics.edges) for P in (F, F_prime)]
    length_gap = max(abs(x - y) for x, y in zip(*lengths))
    dihedral_gap = max(abs(x - y) for x, y in zip(*dihedrals))
    congruent = are_congruent(F, F_prime)

    conditions = (
        Condition('convex', True),
        Condition('equal_edge_lengths', length_gap <= tol, None if length_gap <= tol else {'gap': length_gap}),
        Condition('non_congruent', not congruent, None if not congruent else {'dihedral_gap': dihedral_gap}),
    )
    metrics = {
        'edge_lengths': {'F': lengths[0], "F'": lengths[1], 'max_gap': length_gap},
        'dihedral_angles': {'F': dihedrals[0], "F'": dihedrals[1], 'max_gap': dihedral_gap},
    }
    return Report(conditions, metrics)


class PogorelovPairBuilder(BaseChecker):
    """Builds a prism pair and reports how the two polyhedra compare."""

    name = 'pogorelov-pair'

    def __init__(self, settings: Settings = None, progress: bool = False):
        super().__init__(settings, progress)
        self.pair: Tuple[ConvexPolyhedronH3, ConvexPolyhedronH3] = None

    def run(self, a: float, b: float, c: float, u: float, v: float) -> Report:
        self.pair = counterexample_pair(a, b, c, u, v, self.settings.planarity_tolerance,
                                        self.settings.congruence_tolerance)
        report = compare_pair(*self.pair)
        logger.info("Prism pair: %s", report.verdict)
        return report
