# src/managers/__init__.py
"""
Checkers and builders for Hyperpolar.

Each manager handles one construction or family of checks and returns a
Report.
"""

from .andreev import AndreevChecker
from .combinatorics import CombinatoricsValidator
from .hyperbolic import PolyhedronBuilder
from .pogorelov import PogorelovPairBuilder
from .polar import AdmissibilityChecker, IdealAdmissibilityChecker

__all__ = [
    'AndreevChecker',
    'CombinatoricsValidator',
    'PolyhedronBuilder',
    'PogorelovPairBuilder',
    'AdmissibilityChecker',
    'IdealAdmissibilityChecker'
]
