"""
Conversions between the hyperboloid, Klein, Poincare and upper half-space
models of H^3, and the projective model of de Sitter space.

Upper half-space normalization: the Poincare origin goes to (0, 0, 1) and
the north pole (0, 0, 1) of the ball goes to the point at infinity.
"""

import math
from dataclasses import dataclass

import numpy as np

from .base import (
    PROJECTIVE_INFINITY,
    InvalidInputError,
    NotFinitePointError,
    ProjectiveInfinityError,
)
from .minkowski import minkowski_inner, safe_arccosh
from .models import (
    DSPoint,
    ExteriorPoint,
    HPoint,
    KleinPoint,
    PoincarePoint,
    UpperHalfPoint,
    as_coords,
)

NORTH = np.array([0.0, 0.0, 1.0])


def to_klein(p: HPoint) -> KleinPoint:
    v = as_coords(p)
    return KleinPoint(v[1:] / v[0])


def from_klein(a) -> HPoint:
    x = np.asarray(a.a if isinstance(a, KleinPoint) else a, dtype=float)
    r2 = float(x @ x)
    if r2 >= 1.0:
        raise NotFinitePointError(f"|a| = {math.sqrt(r2)} >= 1 is not a point of H^3")
    return HPoint(np.concatenate(([1.0], x)) / math.sqrt(1.0 - r2))


def klein_to_poincare(a: KleinPoint) -> PoincarePoint:
    x = a.a
    return PoincarePoint(x / (1.0 + math.sqrt(1.0 - float(x @ x))))


def poincare_to_klein(p: PoincarePoint) -> KleinPoint:
    x = p.p
    return KleinPoint(2.0 * x / (1.0 + float(x @ x)))


def poincare_to_upper_half(p: PoincarePoint) -> UpperHalfPoint:
    x = p.p
    r2 = float(x @ x)
    denom = r2 - 2.0 * x[2] + 1.0
    if denom <= 0:
        raise InvalidInputError(f"{x.tolist()} maps to the point at infinity")
    h = np.array([2.0 * x[0], 2.0 * x[1], 1.0 - r2]) / denom
    if h[2] <= 0:
        raise InvalidInputError(f"image of {x.tolist()} has non-positive height")
    return UpperHalfPoint(h)


def upper_half_to_poincare(h: UpperHalfPoint) -> PoincarePoint:
    y = h.h
    denom = y[0] ** 2 + y[1] ** 2 + (y[2] + 1.0) ** 2
    p = np.array([2.0 * y[0], 2.0 * y[1], float(y @ y) - 1.0]) / denom
    return PoincarePoint(p)


def hyperboloid_to_poincare(p: HPoint) -> PoincarePoint:
    v = as_coords(p)
    return PoincarePoint(v[1:] / (1.0 + v[0]))


def poincare_to_hyperboloid(p: PoincarePoint) -> HPoint:
    x = p.p
    r2 = float(x @ x)
    return HPoint(np.concatenate(([1.0 + r2], 2.0 * x)) / (1.0 - r2))


def desitter_to_exterior(n: DSPoint, tol: float = PROJECTIVE_INFINITY) -> ExteriorPoint:
    v = as_coords(n)
    if abs(v[0]) <= tol:
        raise ProjectiveInfinityError(
            f"{v.tolist()} has x0 = 0: its dual plane passes through the Klein origin")
    return ExteriorPoint(v[1:] / v[0])


def exterior_to_desitter(e: ExteriorPoint) -> DSPoint:
    """The de Sitter point with positive x0 over an exterior point."""
    x = e.a
    return DSPoint(np.concatenate(([1.0], x)) / math.sqrt(float(x @ x) - 1.0))


# Distances in each model

def klein_distance(a: KleinPoint, b: KleinPoint) -> float:
    num = 1.0 - float(a.a @ b.a)
    den = math.sqrt((1.0 - float(a.a @ a.a)) * (1.0 - float(b.a @ b.a)))
    return safe_arccosh(num / den)


def poincare_distance(p: PoincarePoint, q: PoincarePoint) -> float:
    d2 = float((p.p - q.p) @ (p.p - q.p))
    den = (1.0 - float(p.p @ p.p)) * (1.0 - float(q.p @ q.p))
    return safe_arccosh(1.0 + 2.0 * d2 / den)


def upper_half_distance(h: UpperHalfPoint, k: UpperHalfPoint) -> float:
    d2 = float((h.h - k.h) @ (h.h - k.h))
    return safe_arccosh(1.0 + d2 / (2.0 * h.h[2] * k.h[2]))


@dataclass(frozen=True)
class DualPlane:
    """The plane {x in H^3 : <x,n> = 0}, also seen as {a : a.normal = offset} in Klein coordinates."""
    n: DSPoint

    @property
    def klein_normal(self) -> np.ndarray:
        return self.n.x

    @property
    def klein_offset(self) -> float:
        return self.n.x0

    def contains(self, x: HPoint, tol: float = 1e-10) -> bool:
        return abs(minkowski_inner(x, self.n)) <= tol

    def contains_klein(self, a, tol: float = 1e-10) -> bool:
        pt = a.a if isinstance(a, KleinPoint) else np.asarray(a, dtype=float)
        return abs(float(pt @ self.klein_normal) - self.klein_offset) <= tol

    def side(self, x) -> float:
        """<x,n>: negative on the half-space the plane bounds."""
        return minkowski_inner(x, self.n)


def dual_plane(n: DSPoint) -> DualPlane:
    return DualPlane(n)
