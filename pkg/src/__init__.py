# src/__init__.py
"""
Hyperpolar

Convex polyhedra in hyperbolic 3-space, their polar cone metrics on the
sphere, and the Andreev and Pogorelov constructions built on them.
"""

__version__ = "1.0.0"

# Make key modules/classes available at package level
from .core.base import GeometryError, Report, Settings
from .core.polyhedron import AbstractPolyhedron
from .managers.andreev import AndreevChecker
from .managers.combinatorics import CombinatoricsValidator
from .managers.hyperbolic import PolyhedronBuilder
from .managers.pogorelov import PogorelovPairBuilder
from .managers.polar import AdmissibilityChecker, IdealAdmissibilityChecker

__all__ = [
    'GeometryError',
    'Report',
    'Settings',
    'AbstractPolyhedron',
    'AndreevChecker',
    'CombinatoricsValidator',
    'PolyhedronBuilder',
    'PogorelovPairBuilder',
    'AdmissibilityChecker',
    'IdealAdmissibilityChecker',
]
