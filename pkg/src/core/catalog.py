"""Combinatorial solids used as the reference corpus."""

from .polyhedron import AbstractPolyhedron, from_faces


def tetrahedron() -> AbstractPolyhedron:
    return from_faces([(0, 1, 2), (0, 3, 1), (1, 3, 2), (0, 2, 3)])


def cube() -> AbstractPolyhedron:
    # bottom 0-3, top 4-7 with 4+i above i
    cycles = [(0, 3, 2, 1), (4, 5, 6, 7)]
    cycles += [(i, (i + 1) % 4, 4 + (i + 1) % 4, 4 + i) for i in range(4)]
    return from_faces(cycles)


def octahedron() -> AbstractPolyhedron:
    # apexes 0 and 5, equator 1-4
    ring = [1, 2, 3, 4]
    cycles = [(0, ring[i], ring[(i + 1) % 4]) for i in range(4)]
    cycles += [(5, ring[(i + 1) % 4], ring[i]) for i in range(4)]
    return from_faces(cycles)


def prism(n: int = 3) -> AbstractPolyhedron:
    """n-gonal prism: bottom 0..n-1, top n..2n-1."""
    bottom = tuple(reversed(range(n)))
    top = tuple(range(n, 2 * n))
    sides = [(i, (i + 1) % n, n + (i + 1) % n, n + i) for i in range(n)]
    return from_faces([bottom, top] + sides)


def triangular_prism() -> AbstractPolyhedron:
    return prism(3)


def square_pyramid() -> AbstractPolyhedron:
    cycles = [(0, 3, 2, 1)] + [(i, (i + 1) % 4, 4) for i in range(4)]
    return from_faces(cycles)


def dodecahedron() -> AbstractPolyhedron:
    """Top pentagon 0-4, upper ring 5-9, lower ring 10-14, bottom 15-19."""
    def a(i): return 5 + i % 5
    def b(i): return 10 + i % 5
    def c(i): return 15 + i % 5

    cycles = [(0, 1, 2, 3, 4)]
    cycles += [(i, a(i), b(i), a(i + 1), (i + 1) % 5) for i in range(5)]
    cycles += [(b(i), c(i), c(i + 1), b(i + 1), a(i + 1)) for i in range(5)]
    cycles += [(15, 19, 18, 17, 16)]
    return from_faces(cycles)


CORPUS = {
    'tetrahedron': tetrahedron,
    'cube': cube,
    'octahedron': octahedron,
    'triangular_prism': triangular_prism,
    'dodecahedron': dodecahedron,
}
