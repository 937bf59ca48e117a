# src/core/__init__.py
"""
Core components for Hyperpolar.

Contains the error hierarchy, reports and settings, the point models of
H^3 and the shared combinatorial polyhedron.
"""

from .base import BaseChecker, Condition, GeometryError, Report, Settings
from .models import DSPoint, HPoint, LorentzTransform
from .polyhedron import AbstractPolyhedron, from_faces
from .utils import log_message

__all__ = [
    'BaseChecker',
    'Condition',
    'GeometryError',
    'Report',
    'Settings',
    'DSPoint',
    'HPoint',
    'LorentzTransform',
    'AbstractPolyhedron',
    'from_faces',
    'log_message'
]
