"""
Linear algebra on E^3_1, the hyperboloid and de Sitter quadrics, and the
spherical trigonometry used everywhere else.
"""

import math

import numpy as np

from .base import ACOSH_CLAMP, InvalidInputError, InvalidTriangleError
from .models import ETA, HPoint, LorentzTransform, MinkowskiVec4, as_coords, minkowski_inner


def safe_arccosh(value: float, clamp: float = ACOSH_CLAMP) -> float:
    if value < 1.0:
        if value < 1.0 - clamp:
            raise InvalidInputError(f"arccosh argument {value} < 1")
        return 0.0
    return math.acosh(value)


def hyperbolic_distance(p: HPoint, q: HPoint) -> float:
    return safe_arccosh(-minkowski_inner(p, q))


def apply_lorentz(A: LorentzTransform, p: MinkowskiVec4) -> MinkowskiVec4:
    """Image of p under A, keeping the point's type (HPoint, DSPoint, ...)."""
    return type(p)(A.m @ p.coords)


def lorentz_identity_defect(A: LorentzTransform) -> float:
    """Max deviation of A_ij A_kj from delta_ik + A_i0 A_k0 (spatial i, k)."""
    m = A.m
    lhs = m[1:, 1:] @ m[1:, 1:].T
    rhs = np.eye(3) + np.outer(m[1:, 0], m[1:, 0])
    return float(np.max(np.abs(lhs - rhs)))


def tangent_towards(p, q) -> np.ndarray:
    """Tangent vector at p (on the hyperboloid) pointing along the geodesic to q.

    q may be any vector off the line through p: an ideal point (null) or a
    projective point beyond the sphere at infinity gives the direction of
    the straight Klein segment from p towards it.
    """
    u, v = as_coords(p), as_coords(q)
    return v + minkowski_inner(u, v) * u


def hyperbolic_angle(p, q, r) -> float:
    """Angle at p between the geodesics p->q and p->r."""
    t1, t2 = tangent_towards(p, q), tangent_towards(p, r)
    n1, n2 = minkowski_inner(t1, t1), minkowski_inner(t2, t2)
    if n1 <= 0 or n2 <= 0:
        raise InvalidInputError("degenerate direction at vertex")
    c = minkowski_inner(t1, t2) / math.sqrt(n1 * n2)
    return math.acos(max(-1.0, min(1.0, c)))


def lorentz_from_frames(source: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Matrix A with A @ source[:, j] = target[:, j] (columns are 4-vectors)."""
    return target @ np.linalg.inv(source)


def eta_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m.T @ ETA @ m - ETA)))


# Spherical trigonometry

def _check_triangle(a: float, b: float, c: float, tol: float = 1e-12) -> None:
    for side in (a, b, c):
        if not (0.0 < side < math.pi):
            raise InvalidTriangleError(f"side {side} outside (0, pi)")
    if a >= b + c - tol or b >= a + c - tol or c >= a + b - tol:
        raise InvalidTriangleError(f"sides ({a}, {b}, {c}) violate the triangle inequality")
    if a + b + c >= 2 * math.pi - tol:
        raise InvalidTriangleError(f"perimeter {a + b + c} >= 2 pi")


def spherical_angle_from_sides(a: float, b: float, c: float) -> float:
    """Angle opposite side a, from cos a = cos b cos c + sin b sin c cos alpha."""
    _check_triangle(a, b, c)
    cos_alpha = (math.cos(a) - math.cos(b) * math.cos(c)) / (math.sin(b) * math.sin(c))
    return math.acos(max(-1.0, min(1.0, cos_alpha)))


def spherical_side_from_angle(b: float, c: float, alpha: float) -> float:
    """Side opposite alpha, given the two enclosing sides (forward law of cosines)."""
    cos_a = math.cos(b) * math.cos(c) + math.sin(b) * math.sin(c) * math.cos(alpha)
    return math.acos(max(-1.0, min(1.0, cos_a)))


def spherical_turning_in_lune(alpha: float, beta: float) -> float:
    """Turning tau = pi - l of a geodesic crossing a lune of internal angle pi - alpha.

    cos l = -cos^2 beta + sin^2 beta cos(pi - alpha); tau <= alpha.
    """
    if not (0.0 <= alpha <= math.pi and 0.0 <= beta <= math.pi):
        raise InvalidInputError(f"angles ({alpha}, {beta}) outside [0, pi]")
    return math.pi - spherical_side_from_angle(beta, math.pi - beta, math.pi - alpha)
