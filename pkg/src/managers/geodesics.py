"""
Depth-bounded search for short closed geodesics on a spherical cone surface.

Two families are enumerated:

* smooth geodesics, which avoid the cone points and cross a cyclic
  sequence of cell sides; the cells are unfolded into the round sphere
  and the geodesic is a great circle through the unfolded corridor;
* chains of saddle connections through cone points, leaving an angle of
  at least pi on both sides of every point they pass.

Any closed geodesic of length <= 2 pi is returned as a witness. An
exhausted search only certifies the depth it reached.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.spatial.transform import Rotation
from tqdm import tqdm

from ..core.base import GLUING_TOLERANCE, STRICT_TOLERANCE

if TYPE_CHECKING:
    from .polar import ConeMetricSurface

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
LONG_SIDE = math.pi - 1e-12
PRUNE_SLACK = 1e-6
ANTIPODAL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Certified:
    """No closed geodesic of length <= 2 pi within `depth`."""
    depth: int
    nodes: int = 0

    kind = 'certified'

    def to_dict(self) -> Dict[str, Any]:
        return {'outcome': self.kind, 'depth': self.depth, 'nodes': self.nodes}


@dataclass(frozen=True)
class Refuted:
    """A closed geodesic of length <= 2 pi."""
    witness: Dict[str, Any]

    kind = 'refuted'

    @property
    def length(self) -> float:
        return self.witness['length']

    def to_dict(self) -> Dict[str, Any]:
        return {'outcome': self.kind, 'witness': self.witness}


@dataclass(frozen=True)
class Inconclusive:
    depth: int
    reason: str
    nodes: int = 0

    kind = 'inconclusive'

    def to_dict(self) -> Dict[str, Any]:
        return {'outcome': self.kind, 'depth': self.depth, 'reason': self.reason, 'nodes': self.nodes}


GeodesicOutcome = Union[Certified, Refuted, Inconclusive]


@dataclass(frozen=True)
class SaddleConnection:
    """Geodesic segment between two vertices with no vertex inside.

    Positions are angular coordinates in the vertex links, measured from
    the first corner of each link.
    """
    start: int
    start_position: float
    end: int
    end_position: float
    length: float
    route: Dict[str, Any]

    def to_dict(self, reverse: bool = False) -> Dict[str, Any]:
        ends = [self.end, self.start] if reverse else [self.start, self.end]
        return {'vertices': ends, 'length': self.length, 'route': self.route, 'reversed': reverse}


class _BudgetExceeded(Exception):
    pass


class _AmbiguousPolygon(Exception):
    pass


# Spherical helpers

def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _tangent(at: np.ndarray, towards: np.ndarray) -> np.ndarray:
    return _unit(towards - float(towards @ at) * at)


def _frame(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    t = _tangent(a, b)
    return np.column_stack([a, t, np.cross(a, t)])


def _crossing(m: np.ndarray, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Where the great circle with pole m meets the arc PQ (m.P < 0 < m.Q)."""
    return _unit(float(m @ Q) * P - float(m @ P) * Q)


def _lune(P: np.ndarray, Q: np.ndarray) -> List[np.ndarray]:
    """Poles m with m.P < 0 < m.Q, as a polygon u, a, -u, b."""
    u = _unit(np.cross(P, Q))
    a = _unit(Q - float(Q @ P) * P)
    b = _unit(float(P @ Q) * Q - P)
    return [u, a, -u, b]


def _depth_inside(x: np.ndarray, poly: List[np.ndarray]) -> float:
    """Smallest signed distance-like value of x to the edge circles of a convex polygon."""
    c = np.sum(poly, axis=0)
    score = math.inf
    for k in range(len(poly)):
        n = np.cross(poly[k], poly[(k + 1) % len(poly)])
        r = np.linalg.norm(n)
        if r < ANTIPODAL_TOLERANCE:
            continue
        n = n / r
        score = min(score, float(n @ x) * (1.0 if n @ c >= 0 else -1.0))
    return score


def _clip(poly: List[np.ndarray], N: np.ndarray, tol: float) -> Optional[List[np.ndarray]]:
    """Intersect a convex spherical polygon with the open hemisphere N.x > 0.

    Consecutive vertices are never antipodal: a closing arc of length pi
    along N-perp gets its midpoint, the one inside the input polygon.
    """
    values = [float(N @ v) for v in poly]
    if max(values) <= tol:
        return None
    out = []
    n = len(poly)
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        da, db = values[k], values[(k + 1) % n]
        if da >= 0:
            out.append(a)
        if (da > 0 > db) or (da < 0 < db):
            x = da * b - db * a
            out.append(_unit(-x if da < 0 else x))
    if len(out) < 3:
        return None

    closed = []
    for k in range(len(out)):
        p, q = out[k], out[(k + 1) % len(out)]
        closed.append(p)
        if np.linalg.norm(p + q) < ANTIPODAL_TOLERANCE:
            w = _unit(np.cross(N, p))
            inside, outside = sorted((w, -w), key=lambda m: _depth_inside(m, poly), reverse=True)
            if _depth_inside(inside, poly) < -tol or _depth_inside(outside, poly) >= -tol:
                raise _AmbiguousPolygon()
            closed.append(inside)
    return closed


def _centroid(poly: List[np.ndarray]) -> Optional[np.ndarray]:
    s = np.sum(poly, axis=0)
    r = np.linalg.norm(s)
    return s / r if r > 1e-12 else None


def _on_arc(x: np.ndarray, P: np.ndarray, Q: np.ndarray, n: np.ndarray, tol: float = 1e-12) -> bool:
    return float(np.cross(P, x) @ n) >= -tol and float(np.cross(x, Q) @ n) >= -tol


def _point_arc_distance(x: np.ndarray, P: np.ndarray, Q: np.ndarray) -> float:
    n = np.cross(P, Q)
    n = n / np.linalg.norm(n)
    proj = x - float(x @ n) * n
    r = np.linalg.norm(proj)
    if r > 1e-12 and _on_arc(proj / r, P, Q, n):
        return math.asin(min(1.0, abs(float(x @ n))))
    return min(math.acos(max(-1.0, min(1.0, float(x @ P)))),
               math.acos(max(-1.0, min(1.0, float(x @ Q)))))


def _arc_distance(A: Tuple[np.ndarray, np.ndarray], B: Tuple[np.ndarray, np.ndarray]) -> float:
    """Spherical distance between two minor arcs (0 when unsure)."""
    (P1, Q1), (P2, Q2) = A, B
    n1, n2 = np.cross(P1, Q1), np.cross(P2, Q2)
    d = np.cross(n1, n2)
    r = np.linalg.norm(d)
    if r < 1e-12:
        return 0.0
    for y in (d / r, -d / r):
        if _on_arc(y, P1, Q1, n1, 1e-9) and _on_arc(y, P2, Q2, n2, 1e-9):
            return 0.0
    return min(_point_arc_distance(P1, P2, Q2), _point_arc_distance(Q1, P2, Q2),
               _point_arc_distance(P2, P1, Q1), _point_arc_distance(Q2, P1, Q1))


def _narrow(interval: Tuple[float, float], N: np.ndarray, basis, tol: float) -> Optional[Tuple[float, float]]:
    """Intersect an interval of poles on V-perp with the half-circle m.N > 0."""
    V, e1, e2 = basis
    x, y = float(N @ e1), float(N @ e2)
    if math.hypot(x, y) < 1e-15:
        return None
    lo, hi = interval
    center = math.atan2(y, x)
    center += TWO_PI * round(((lo + hi) / 2 - center) / TWO_PI)
    lo, hi = max(lo, center - math.pi / 2), min(hi, center + math.pi / 2)
    return (lo, hi) if hi - lo > tol else None


class GeodesicSearch:
    """Enumerates closed geodesics of length <= 2 pi up to a depth.

    Depth bounds the cells crossed by a smooth geodesic or a saddle
    connection, and the number of connections in a chain.
    """

    def __init__(self, surface: 'ConeMetricSurface', depth: int, node_budget: int = 2_000_000,
                 tol: float = STRICT_TOLERANCE, length_tol: float = GLUING_TOLERANCE,
                 progress: bool = False):
        self.surface = surface
        self.depth = depth
        self.node_budget = node_budget
        self.tol = tol
        self.length_tol = length_tol
        self.progress = progress
        self.frames = [cell.realize()[0] for cell in surface.cells]
        self.nodes = 0
        self.skipped_long = False

    def run(self) -> GeodesicOutcome:
        try:
            witness = self._search_vertex_paths() or self._search_smooth()
        except _BudgetExceeded:
            logger.info("Geodesic search stopped after %d nodes", self.nodes)
            return Inconclusive(self.depth, 'node budget exhausted', self.nodes)
        except _AmbiguousPolygon:
            logger.warning("Geodesic search met a pole region it cannot orient after %d nodes", self.nodes)
            return Inconclusive(self.depth, 'ambiguous pole region', self.nodes)
        if witness is not None:
            logger.info("Closed geodesic of length %.12f found", witness['length'])
            return Refuted(witness)
        if self.skipped_long:
            return Inconclusive(self.depth, 'sides of length pi cannot be crossed', self.nodes)
        logger.debug("Geodesic search exhausted depth %d in %d nodes", self.depth, self.nodes)
        return Certified(self.depth, self.nodes)

    # Shared

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise _BudgetExceeded()

    def _is_long(self, c: int, s: int) -> bool:
        return self.surface.cells[c].sides[s] >= LONG_SIDE

    def _glue(self, R: np.ndarray, c: int, x: int) -> Tuple[int, int, np.ndarray]:
        """Place the neighbour across side x of the cell c (placed by R)."""
        n = len(self.surface.cells[c])
        placed = self.frames[c] @ R.T
        c2, s2 = self.surface.partner(c, x)
        W = self.frames[c2]
        m2 = len(self.surface.cells[c2])
        target = _frame(placed[x], placed[(x + 1) % n])
        source = _frame(W[(s2 + 1) % m2], W[s2])
        return c2, s2, target @ source.T

    def _bound(self, bounds: List[float], edges: List[Tuple[np.ndarray, np.ndarray]],
               edge: Tuple[np.ndarray, np.ndarray], floor: float = 0.0) -> float:
        return max([floor] + [b + _arc_distance(e, edge) for b, e in zip(bounds, edges)])

    # Smooth geodesics

    def _search_smooth(self) -> Optional[Dict[str, Any]]:
        cells = self.surface.cells
        starts = [(c, x) for c in range(len(cells)) for x in range(len(cells[c]))]
        for start in tqdm(starts, desc='Smooth geodesics', disable=not self.progress):
            c, x = start
            if self._is_long(c, x):
                self.skipped_long = True
                continue
            n = len(cells[c])
            P, Q = self.frames[c][x], self.frames[c][(x + 1) % n]
            witness = self._extend([start], [np.eye(3)], [(P, Q)], _lune(P, Q), [0.0])
            if witness is not None:
                return witness
        return None

    def _extend(self, path, rotations, edges, polygon, bounds) -> Optional[Dict[str, Any]]:
        c, x = path[-1]
        start = path[0]
        nxt, entry, R = self._glue(rotations[-1], c, x)

        if nxt == start[0] and entry != start[1]:
            witness = self._close(path, edges, polygon, R)
            if witness is not None:
                return witness
        if len(path) >= self.depth:
            return None

        n = len(self.surface.cells[nxt])
        placed = self.frames[nxt] @ R.T
        for x2 in range(n):
            if x2 == entry or (nxt, x2) < start:
                continue
            if self._is_long(nxt, x2):
                self.skipped_long = True
                continue
            self._tick()
            edge = (placed[x2], placed[(x2 + 1) % n])
            poly = _clip(polygon, -edge[0], self.tol)
            if poly is not None:
                poly = _clip(poly, edge[1], self.tol)
            if poly is None:
                continue
            bound = self._bound(bounds, edges, edge)
            if bound > TWO_PI + PRUNE_SLACK:
                continue
            witness = self._extend(path + [(nxt, x2)], rotations + [R], edges + [edge], poly, bounds + [bound])
            if witness is not None:
                return witness
        return None

    def _close(self, path, edges, polygon, H: np.ndarray) -> Optional[Dict[str, Any]]:
        """Closed corridors: the pole must be fixed by the holonomy H."""
        rotvec = Rotation.from_matrix(H).as_rotvec()
        angle = float(np.linalg.norm(rotvec))
        if angle < 1e-9:
            candidates = [_centroid(polygon)]
        else:
            axis = rotvec / angle
            candidates = [axis, -axis]

        P0, Q0 = edges[0]
        loop = edges + [(H @ P0, H @ Q0)]
        for m in candidates:
            if m is None:
                continue
            if not all(float(m @ P) < -self.tol and float(m @ Q) > self.tol for P, Q in edges):
                continue
            length = self._trace(m, loop)
            if length is not None and length <= TWO_PI + self.length_tol:
                return {
                    'kind': 'smooth',
                    'crossings': [list(p) for p in path],
                    'pole': m.tolist(),
                    'length': length,
                }
        return None

    def _trace(self, m: np.ndarray, edges) -> Optional[float]:
        """Arc length from the first to the last crossing, if they come in order."""
        points = [_crossing(m, P, Q) for P, Q in edges]
        e1 = points[0]
        e2 = np.cross(m, e1)
        total, prev = 0.0, 0.0
        for X in points[1:]:
            raw = math.atan2(float(X @ e2), float(X @ e1))
            step = (raw - prev) % TWO_PI
            if not (self.tol < step < math.pi):
                return None
            total += step
            prev = raw
        return total

    # Geodesics through cone points

    def _search_vertex_paths(self) -> Optional[Dict[str, Any]]:
        connections = self.saddle_connections()
        leaving = defaultdict(list)
        for k, sc in enumerate(connections):
            leaving[sc.start].append((k, False))
            leaving[sc.end].append((k, True))
        logger.debug("%d saddle connections of length <= 2 pi", len(connections))

        for k, sc in enumerate(connections):
            for reverse in (False, True):
                witness = self._chain(connections, leaving, [(k, reverse)], sc.length)
                if witness is not None:
                    return witness
        return None

    @staticmethod
    def _ends(sc: SaddleConnection, reverse: bool):
        """(from, out position, to, arrival position)"""
        if reverse:
            return sc.end, sc.end_position, sc.start, sc.start_position
        return sc.start, sc.start_position, sc.end, sc.end_position

    def _straight(self, v: int, arrival: float, departure: float) -> bool:
        total = self.surface.cone_angle(v)
        delta = (departure - arrival) % total
        return delta >= math.pi - self.length_tol and total - delta >= math.pi - self.length_tol

    def _chain(self, connections, leaving, chain, length) -> Optional[Dict[str, Any]]:
        first_id, first_rev = chain[0]
        origin, out0, _, _ = self._ends(connections[first_id], first_rev)
        _, _, v, arrival = self._ends(connections[chain[-1][0]], chain[-1][1])

        if v == origin and self._straight(v, arrival, out0):
            return {
                'kind': 'vertex',
                'connections': [connections[k].to_dict(rev) for k, rev in chain],
                'length': length,
            }
        if len(chain) >= self.depth:
            return None

        for k, rev in leaving[v]:
            if k < first_id:
                continue
            sc = connections[k]
            if length + sc.length > TWO_PI + self.length_tol:
                continue
            _, departure, _, _ = self._ends(sc, rev)
            if not self._straight(v, arrival, departure):
                continue
            self._tick()
            witness = self._chain(connections, leaving, chain + [(k, rev)], length + sc.length)
            if witness is not None:
                return witness
        return None

    def saddle_connections(self) -> List[SaddleConnection]:
        """Cell sides plus interior connections of length <= 2 pi."""
        surface = self.surface
        found: List[SaddleConnection] = []
        seen = set()

        for (c, s), _ in surface.gluings:
            cell = surface.cells[c]
            nxt = (s + 1) % len(cell)
            found.append(SaddleConnection(
                start=surface.vertex_of(c, s),
                start_position=surface.corner_offset(c, s),
                end=surface.vertex_of(c, nxt),
                end_position=surface.corner_offset(c, nxt) + cell.angles[nxt],
                length=cell.sides[s],
                route={'side': [c, s]},
            ))

        corners = [(c, i) for c in range(len(surface.cells)) for i in range(len(surface.cells[c]))
                   if surface.cells[c].angles[i] <= math.pi + self.tol]
        for c, i in tqdm(corners, desc='Saddle connections', disable=not self.progress):
            for sc in self._corner_connections(c, i):
                key = frozenset({(sc.start, round(sc.start_position, 9)), (sc.end, round(sc.end_position, 9))})
                if (key, round(sc.length, 9)) in seen:
                    continue
                seen.add((key, round(sc.length, 9)))
                found.append(sc)
        return found

    def _corner_connections(self, c: int, i: int) -> List[SaddleConnection]:
        frame = self.frames[c]
        n = len(self.surface.cells[c])
        V = frame[i]
        e1 = _tangent(V, frame[(i + 1) % n])
        basis = (V, e1, np.cross(V, e1))
        # pole angle beta gives the direction at angle beta - pi/2 inside the corner
        interval = (math.pi / 2, math.pi / 2 + self.surface.cells[c].angles[i])
        out: List[SaddleConnection] = []
        self._walk((c, i), basis, c, np.eye(3), None, interval, [], [], [], out)
        return out

    def _walk(self, corner, basis, d, R, entry, interval, exits, bounds, route, out):
        c0, i0 = corner
        V, e1, e2 = basis
        n = len(self.surface.cells[d])
        placed = self.frames[d] @ R.T
        at_start = not exits
        adjacent = {i0, (i0 + 1) % n, (i0 - 1) % n}

        for j in range(n):
            if at_start and j in adjacent:
                continue
            for m, beta in self._aims(V, placed[j], basis, interval):
                sc = self._finish(corner, basis, m, beta, exits, d, j, placed, route)
                if sc is not None:
                    out.append(sc)

        if len(route) + 1 >= self.depth:
            return
        for x in range(n):
            if x == entry or (at_start and x in (i0, (i0 - 1) % n)):
                continue
            if self._is_long(d, x):
                self.skipped_long = True
                continue
            self._tick()
            edge = (placed[x], placed[(x + 1) % n])
            narrowed = _narrow(interval, -edge[0], basis, self.tol)
            if narrowed is not None:
                narrowed = _narrow(narrowed, edge[1], basis, self.tol)
            if narrowed is None:
                continue
            bound = self._bound(bounds, exits, edge, _point_arc_distance(V, *edge))
            if bound > TWO_PI + PRUNE_SLACK:
                continue
            nxt, s2, R2 = self._glue(R, d, x)
            self._walk(corner, basis, nxt, R2, s2, narrowed, exits + [edge], bounds + [bound],
                       route + [(d, x)], out)

    def _aims(self, V, W, basis, interval) -> List[Tuple[np.ndarray, float]]:
        """Poles of great circles from V through W that leave V inside the interval."""
        _, e1, e2 = basis
        lo, hi = interval
        mid = (lo + hi) / 2
        cross = np.cross(V, W)
        r = np.linalg.norm(cross)
        if r < 1e-12:
            # W = +-V: every direction reaches it
            return [(math.cos(mid) * e1 + math.sin(mid) * e2, mid)]
        aims = []
        for m in (cross / r, -cross / r):
            beta = math.atan2(float(m @ e2), float(m @ e1))
            beta += TWO_PI * round((mid - beta) / TWO_PI)
            if lo + self.tol < beta < hi - self.tol:
                aims.append((m, beta))
        return aims

    def _finish(self, corner, basis, m, beta, exits, d, j, placed, route) -> Optional[SaddleConnection]:
        c0, i0 = corner
        V = basis[0]
        u = np.cross(m, V)
        length, prev = 0.0, 0.0
        for P, Q in exits:
            X = _crossing(m, P, Q)
            raw = math.atan2(float(X @ u), float(X @ V))
            step = (raw - prev) % TWO_PI
            if not (self.tol < step < math.pi):
                return None
            length += step
            prev = raw
        W = placed[j]
        raw = math.atan2(float(W @ u), float(W @ V))
        step = (raw - prev) % TWO_PI
        if not (self.tol < step < math.pi + self.tol):
            return None
        length += step
        if length > TWO_PI + self.length_tol:
            return None

        n = len(self.surface.cells[d])
        t = _tangent(W, placed[(j + 1) % n])
        back = -np.cross(m, W)
        arrival = math.atan2(float(back @ np.cross(W, t)), float(back @ t)) % TWO_PI
        if arrival > self.surface.cells[d].angles[j] + 1e-9:
            return None

        surface = self.surface
        return SaddleConnection(
            start=surface.vertex_of(c0, i0),
            start_position=surface.corner_offset(c0, i0) + beta - math.pi / 2,
            end=surface.vertex_of(d, j),
            end_position=surface.corner_offset(d, j) + arrival,
            length=length,
            route={'corner': [c0, i0], 'crossings': [list(r) for r in route], 'target': [d, j]},
        )


def search_closed_geodesics(surface: 'ConeMetricSurface', depth: int, node_budget: int = 2_000_000,
                            progress: bool = False) -> GeodesicOutcome:
    return GeodesicSearch(surface, depth, node_budget=node_budget, progress=progress).run()
