"""
Value types shared by every module.

Minkowski space E^3_1 uses signature (-,+,+,+) with index 0 timelike.
All types are immutable; their arrays are flagged read-only.
"""

from dataclasses import dataclass
import numpy as np
from scipy.spatial.transform import Rotation

from .base import (
    QUADRIC_TOLERANCE,
    RENORMALIZE_TOLERANCE,
    InvalidInputError,
    InvalidTransformError,
    QuadricError,
)

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
ETA.setflags(write=False)


def _frozen(values, shape) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(shape)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"non-finite coordinates: {arr}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MinkowskiVec4:
    """A vector x = (x0, x) of E^3_1."""
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'coords', _frozen(self.coords, (4,)))

    @classmethod
    def of(cls, x0: float, x1: float, x2: float, x3: float):
        return cls(np.array([x0, x1, x2, x3]))

    @property
    def x0(self) -> float:
        return float(self.coords[0])

    @property
    def x(self) -> np.ndarray:
        return self.coords[1:]

    def norm2(self) -> float:
        return minkowski_inner(self.coords, self.coords)

    def isclose(self, other: 'MinkowskiVec4', tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coords, other.coords, rtol=0.0, atol=tol))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.coords.tolist()})"


@dataclass(frozen=True, eq=False, repr=False)
class HPoint(MinkowskiVec4):
    """A point of H^3 on the upper sheet <v,v> = -1, v0 > 0.

    Vectors within RENORMALIZE_TOLERANCE of the quadric are pulled back
    onto it; anything further away is rejected.
    """

    def __post_init__(self):
        super().__post_init__()
        v = self.coords
        if v[0] <= 0:
            raise QuadricError(f"not on the upper sheet: {v.tolist()}")
        q = minkowski_inner(v, v)
        if abs(q + 1.0) > QUADRIC_TOLERANCE:
            if abs(q + 1.0) > RENORMALIZE_TOLERANCE:
                raise QuadricError(f"<v,v> = {q}, expected -1")
            object.__setattr__(self, 'coords', _frozen(v / np.sqrt(-q), (4,)))

    @classmethod
    def normalize(cls, values) -> 'HPoint':
        """Scale any future-timelike vector onto the hyperboloid."""
        v = np.asarray(values, dtype=float)
        q = minkowski_inner(v, v)
        if q >= 0 or v[0] <= 0:
            raise QuadricError(f"not a future timelike vector: {v.tolist()}")
        return cls(v / np.sqrt(-q))

    @classmethod
    def origin(cls) -> 'HPoint':
        return cls(np.array([1.0, 0.0, 0.0, 0.0]))


@dataclass(frozen=True, eq=False, repr=False)
class DSPoint(MinkowskiVec4):
    """A point of de Sitter space <v,v> = +1 (an oriented plane of H^3)."""

    def __post_init__(self):
        super().__post_init__()
        v = self.coords
        q = minkowski_inner(v, v)
        if abs(q - 1.0) > QUADRIC_TOLERANCE:
            if abs(q - 1.0) > RENORMALIZE_TOLERANCE:
                raise QuadricError(f"<v,v> = {q}, expected +1")
            object.__setattr__(self, 'coords', _frozen(v / np.sqrt(q), (4,)))

    @classmethod
    def normalize(cls, values) -> 'DSPoint':
        """Scale any spacelike vector onto the de Sitter quadric."""
        v = np.asarray(values, dtype=float)
        q = minkowski_inner(v, v)
        if q <= 0:
            raise QuadricError(f"not a spacelike vector: {v.tolist()}")
        return cls(v / np.sqrt(q))


@dataclass(frozen=True, eq=False)
class LorentzTransform:
    """A 4x4 matrix A with A^T eta A = eta and A00 >= 1."""
    m: np.ndarray

    def __post_init__(self):
        A = _frozen(self.m, (4, 4))
        defect = np.max(np.abs(A.T @ ETA @ A - ETA))
        if defect > QUADRIC_TOLERANCE:
            raise InvalidTransformError(f"A^T eta A differs from eta by {defect:.3e}")
        if A[0, 0] < 1.0 - QUADRIC_TOLERANCE:
            raise InvalidTransformError(f"A00 = {A[0, 0]} < 1 does not fix the upper sheet")
        object.__setattr__(self, 'm', A)

    @classmethod
    def identity(cls) -> 'LorentzTransform':
        return cls(np.eye(4))

    @classmethod
    def boost(cls, rapidity: float, axis: int = 1) -> 'LorentzTransform':
        """Boost along spatial axis 1, 2 or 3."""
        if axis not in (1, 2, 3):
            raise InvalidInputError(f"boost axis must be 1, 2 or 3, got {axis}")
        A = np.eye(4)
        ch, sh = np.cosh(rapidity), np.sinh(rapidity)
        A[0, 0] = A[axis, axis] = ch
        A[0, axis] = A[axis, 0] = sh
        return cls(A)

    @classmethod
    def rotation(cls, R) -> 'LorentzTransform':
        """Spatial rotation (or reflection) block diag(1, R)."""
        A = np.eye(4)
        A[1:, 1:] = np.asarray(R, dtype=float)
        return cls(A)

    @classmethod
    def reflection(cls, axis: int = 1) -> 'LorentzTransform':
        A = np.eye(4)
        A[axis, axis] = -1.0
        return cls(A)

    @classmethod
    def random(cls, rng: np.random.Generator, max_rapidity: float = 2.0) -> 'LorentzTransform':
        """Rotation . boost . rotation with a uniform random rapidity."""
        seed = int(rng.integers(0, 2**31 - 1))
        r1, r2 = Rotation.random(2, random_state=seed).as_matrix()
        t = rng.uniform(-max_rapidity, max_rapidity)
        return cls.rotation(r1) @ cls.boost(t) @ cls.rotation(r2)

    def __matmul__(self, other: 'LorentzTransform') -> 'LorentzTransform':
        return LorentzTransform(self.m @ other.m)

    def inverse(self) -> 'LorentzTransform':
        return LorentzTransform(ETA @ self.m.T @ ETA)

    @property
    def preserves_orientation(self) -> bool:
        return bool(np.linalg.det(self.m) > 0)


@dataclass(frozen=True, eq=False)
class KleinPoint:
    """Point of the projective (Klein) model: the open unit ball."""
    a: np.ndarray

    def __post_init__(self):
        a = _frozen(self.a, (3,))
        if np.dot(a, a) >= 1.0:
            raise InvalidInputError(f"Klein point outside the unit ball: {a.tolist()}")
        object.__setattr__(self, 'a', a)


@dataclass(frozen=True, eq=False)
class ExteriorPoint:
    """Projective image of a de Sitter point: outside the closed unit ball."""
    a: np.ndarray

    def __post_init__(self):
        a = _frozen(self.a, (3,))
        if np.dot(a, a) <= 1.0:
            raise InvalidInputError(f"exterior point inside the unit ball: {a.tolist()}")
        object.__setattr__(self, 'a', a)


@dataclass(frozen=True, eq=False)
class PoincarePoint:
    """Point of the Poincare ball model."""
    p: np.ndarray

    def __post_init__(self):
        p = _frozen(self.p, (3,))
        if np.dot(p, p) >= 1.0:
            raise InvalidInputError(f"Poincare point outside the unit ball: {p.tolist()}")
        object.__setattr__(self, 'p', p)


@dataclass(frozen=True, eq=False)
class UpperHalfPoint:
    """Point of the upper half-space model, height h[2] > 0."""
    h: np.ndarray

    def __post_init__(self):
        h = _frozen(self.h, (3,))
        if h[2] <= 0:
            raise InvalidInputError(f"non-positive height: {h.tolist()}")
        object.__setattr__(self, 'h', h)


@dataclass(frozen=True, eq=False)
class EuclideanIsometry:
    """x -> D + R x on R^3.

    R is orthogonal. It is a rotation (det +1) when the inducing Lorentz
    transform preserves orientation and a reflection (det -1) otherwise,
    so `proper` tells the two apart.
    """
    D: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        D = _frozen(self.D, (3,))
        R = _frozen(self.R, (3, 3))
        defect = np.max(np.abs(R.T @ R - np.eye(3)))
        if defect > 1e-10:
            raise InvalidTransformError(f"R is not orthogonal (defect {defect:.3e})")
        object.__setattr__(self, 'D', D)
        object.__setattr__(self, 'R', R)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.R))

    @property
    def proper(self) -> bool:
        return self.det > 0

    def __call__(self, y) -> np.ndarray:
        return self.D + self.R @ np.asarray(y, dtype=float)


def as_coords(point) -> np.ndarray:
    """Raw 4-vector of a MinkowskiVec4 or array-like."""
    if isinstance(point, MinkowskiVec4):
        return point.coords
    return np.asarray(point, dtype=float)


def minkowski_inner(a, b) -> float:
    """<a,b> = -a0 b0 + a.b"""
    u, v = as_coords(a), as_coords(b)
    return float(-u[0] * v[0] + u[1:] @ v[1:])
