import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.core import catalog  # noqa: E402
from src.managers.hyperbolic import HalfSpace, SphericalPolygon, build_from_halfspaces  # noqa: E402
from src.managers.polar import ConeMetricSurface  # noqa: E402

OCTANT = SphericalPolygon((math.pi / 2,) * 3, (math.pi / 2,) * 3)
TETRA_DIRECTIONS = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]


def tetrahedron_halfspaces(offset: float = 0.2):
    """Regular tetrahedron around the Klein origin; vertices at distance 3*offset."""
    return [HalfSpace.of(offset, *(np.array(d) / math.sqrt(3))) for d in TETRA_DIRECTIONS]


def cube_halfspaces(offset: float = 0.3):
    """Cube |a_i| <= offset in Klein coordinates."""
    hs = []
    for axis in range(3):
        for sign in (1.0, -1.0):
            n = np.zeros(3)
            n[axis] = sign
            hs.append(HalfSpace.of(offset, *n))
    return hs


def ideal_octahedron_halfspaces():
    """|a1| + |a2| + |a3| <= 1: vertices on the sphere at infinity."""
    return [HalfSpace.of(1.0, s1, s2, s3) for s1 in (1, -1) for s2 in (1, -1) for s3 in (1, -1)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(params=sorted(catalog.CORPUS))
def solid(request):
    return catalog.CORPUS[request.param]()


@pytest.fixture
def compact_tetrahedron():
    return build_from_halfspaces(tetrahedron_halfspaces())


@pytest.fixture
def compact_cube():
    return build_from_halfspaces(cube_halfspaces())


@pytest.fixture
def ideal_octahedron():
    return build_from_halfspaces(ideal_octahedron_halfspaces())


@pytest.fixture
def pillow():
    """Two octant triangles glued along their boundaries."""
    gluings = (((0, 0), (1, 2)), ((0, 1), (1, 1)), ((0, 2), (1, 0)))
    return ConeMetricSurface((OCTANT, OCTANT), gluings)
