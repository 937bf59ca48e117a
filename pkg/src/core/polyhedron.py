"""
The abstract polyhedron as a chain complex X2 -> X1 -> X0.

Edges are oriented (tail -> head) and carry positive integer ids. A face
is a cyclic sequence of signed edge ids: +e traverses e from tail to head,
-e from head to tail. Faces are oriented so that each edge is traversed
once in each direction.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np

from .base import InvalidInputError


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int


@dataclass(frozen=True)
class Face:
    id: int
    boundary: Tuple[int, ...]


@dataclass(frozen=True)
class AbstractPolyhedron:
    """Shared combinatorial polyhedron model for every module.

    Construction checks only that every reference resolves; the incidence
    invariants are reported by combinatorics.validate.
    """
    vertices: Tuple[int, ...]
    edges: Tuple[Edge, ...]
    faces: Tuple[Face, ...]

    def __post_init__(self):
        object.__setattr__(self, 'vertices', tuple(self.vertices))
        object.__setattr__(self, 'edges', tuple(self.edges))
        object.__setattr__(self, 'faces', tuple(self.faces))

        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise InvalidInputError("duplicate vertex ids")
        eids = [e.id for e in self.edges]
        if len(set(eids)) != len(eids):
            raise InvalidInputError("duplicate edge ids")
        fids = [f.id for f in self.faces]
        if len(set(fids)) != len(fids):
            raise InvalidInputError("duplicate face ids")

        for e in self.edges:
            if e.id <= 0:
                raise InvalidInputError(f"edge id {e.id} must be a positive integer")
            if e.tail not in vset or e.head not in vset:
                raise InvalidInputError(f"edge {e.id} references an unknown vertex")
            if e.tail == e.head:
                raise InvalidInputError(f"edge {e.id} is a loop")
        known = set(eids)
        for f in self.faces:
            if not f.boundary:
                raise InvalidInputError(f"face {f.id} has an empty boundary")
            for s in f.boundary:
                if abs(s) not in known:
                    raise InvalidInputError(f"face {f.id} references unknown edge {abs(s)}")

    # Counts

    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def E(self) -> int:
        return len(self.edges)

    @property
    def F(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.V - self.E + self.F

    # Lookups

    def edge(self, edge_id: int) -> Edge:
        return self.edges_by_id[edge_id]

    def face(self, face_id: int) -> Face:
        for f in self.faces:
            if f.id == face_id:
                return f
        raise KeyError(face_id)

    @cached_property
    def edges_by_id(self) -> Dict[int, Edge]:
        return {e.id: e for e in self.edges}

    def start(self, signed: int) -> int:
        e = self.edge(abs(signed))
        return e.tail if signed > 0 else e.head

    def end(self, signed: int) -> int:
        e = self.edge(abs(signed))
        return e.head if signed > 0 else e.tail

    def face_vertices(self, face_id: int) -> List[int]:
        """Vertices of a face in boundary order (start of each signed edge)."""
        return [self.start(s) for s in self.face(face_id).boundary]

    def edge_faces(self) -> Dict[int, List[Tuple[int, int]]]:
        """edge id -> [(face id, sign), ...]"""
        out: Dict[int, List[Tuple[int, int]]] = {e.id: [] for e in self.edges}
        for f in self.faces:
            for s in f.boundary:
                out[abs(s)].append((f.id, 1 if s > 0 else -1))
        return out

    def vertex_degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in (e.tail, e.head))

    def vertex_faces(self, v: int) -> List[int]:
        return [f.id for f in self.faces if v in self.face_vertices(f.id)]

    def vertex_rotation(self, v: int) -> List[Tuple[int, int]]:
        """Faces around v in cyclic order, each with the signed edge leaving v in it.

        Consecutive entries (f, s), (f', s') satisfy: the edge |s| is shared
        by f and f'. Requires a valid polyhedron.
        """
        outgoing: Dict[int, int] = {}
        for f in self.faces:
            for s in f.boundary:
                if self.start(s) == v:
                    outgoing[f.id] = s
        if not outgoing:
            return []
        sharing = self.edge_faces()
        first = min(outgoing)
        rotation = [(first, outgoing[first])]
        current = first
        while True:
            s = outgoing[current]
            others = [fid for fid, _ in sharing[abs(s)] if fid != current]
            if not others:
                raise InvalidInputError(f"edge {abs(s)} lies in only one face")
            current = others[0]
            if current == first:
                break
            if current not in outgoing or len(rotation) > len(outgoing):
                raise InvalidInputError(f"faces around vertex {v} do not close up")
            rotation.append((current, outgoing[current]))
        return rotation

    # Chain complex

    def boundary_matrices(self) -> Tuple[np.ndarray, np.ndarray]:
        """d1 (V x E) and d2 (E x F) in the stored vertex/edge/face order."""
        vindex = {v: i for i, v in enumerate(self.vertices)}
        eindex = {e.id: i for i, e in enumerate(self.edges)}
        d1 = np.zeros((self.V, self.E), dtype=int)
        for j, e in enumerate(self.edges):
            d1[vindex[e.head], j] += 1
            d1[vindex[e.tail], j] -= 1
        d2 = np.zeros((self.E, self.F), dtype=int)
        for j, f in enumerate(self.faces):
            for s in f.boundary:
                d2[eindex[abs(s)], j] += 1 if s > 0 else -1
        return d1, d2

    def graph(self) -> nx.Graph:
        """1-skeleton."""
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((e.tail, e.head) for e in self.edges)
        return g

    def face_graph(self) -> nx.Graph:
        """Faces joined when they share an edge; edge attribute `edge` is the id."""
        g = nx.Graph()
        g.add_nodes_from(f.id for f in self.faces)
        for eid, incident in self.edge_faces().items():
            if len(incident) == 2:
                g.add_edge(incident[0][0], incident[1][0], edge=eid)
        return g

    def incidence_graph(self) -> nx.Graph:
        """Hasse diagram of the face lattice, nodes tagged with their rank."""
        g = nx.Graph()
        for v in self.vertices:
            g.add_node(('v', v), rank=0)
        for e in self.edges:
            g.add_node(('e', e.id), rank=1)
            g.add_edge(('e', e.id), ('v', e.tail))
            g.add_edge(('e', e.id), ('v', e.head))
        for f in self.faces:
            g.add_node(('f', f.id), rank=2)
            for s in f.boundary:
                g.add_edge(('f', f.id), ('e', abs(s)))
        return g

    def to_dict(self) -> dict:
        return {
            'vertices': list(self.vertices),
            'edges': [{'id': e.id, 'tail': e.tail, 'head': e.head} for e in self.edges],
            'faces': [{'id': f.id, 'boundary': list(f.boundary)} for f in self.faces],
        }


def from_faces(cycles: Sequence[Sequence[int]], face_ids: Sequence[int] = None) -> AbstractPolyhedron:
    """Build a polyhedron from consistently oriented vertex cycles.

    Edge ids are assigned from 1 in order of first appearance; each edge is
    oriented the way its first face traverses it.
    """
    face_ids = list(face_ids) if face_ids is not None else list(range(len(cycles)))
    edge_ids: Dict[frozenset, Edge] = {}
    faces = []
    for fid, cycle in zip(face_ids, cycles):
        boundary = []
        n = len(cycle)
        for i in range(n):
            u, w = cycle[i], cycle[(i + 1) % n]
            key = frozenset((u, w))
            if key not in edge_ids:
                edge_ids[key] = Edge(len(edge_ids) + 1, u, w)
            e = edge_ids[key]
            boundary.append(e.id if e.tail == u else -e.id)
        faces.append(Face(fid, tuple(boundary)))
    vertices = sorted({v for c in cycles for v in c})
    return AbstractPolyhedron(tuple(vertices), tuple(edge_ids.values()), tuple(faces))
