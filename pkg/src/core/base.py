from abc import ABC, abstractmethod
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, List, Optional, Tuple
from dotenv import dotenv_values

# Tolerances
QUADRIC_TOLERANCE = 1e-9
RENORMALIZE_TOLERANCE = 1e-6
ACOSH_CLAMP = 1e-12
PROJECTIVE_INFINITY = 1e-12
IDEAL_TOLERANCE = 1e-7
GLUING_TOLERANCE = 1e-9
STRICT_TOLERANCE = 1e-12
PLANARITY_TOLERANCE = 1e-8
CONGRUENCE_TOLERANCE = 1e-9

ENV_PREFIX = "HYPERPOLAR_"


class GeometryError(Exception):
    """Base class for every error raised by the toolkit."""


class QuadricError(GeometryError):
    pass


class InvalidInputError(GeometryError):
    pass


class InvalidTriangleError(InvalidInputError):
    pass


class NotFinitePointError(InvalidInputError):
    pass


class ProjectiveInfinityError(InvalidInputError):
    pass


class InvalidTransformError(InvalidInputError):
    pass


class OutsideDomainError(InvalidInputError):
    pass


class DegeneratePolyhedronError(GeometryError):
    pass


class NoDihedralError(GeometryError):
    pass


class NonCompactError(GeometryError):
    pass


class DegenerateCurveError(GeometryError):
    pass


class UnsupportedInputError(GeometryError):
    pass


class InvalidSurfaceError(GeometryError):
    pass


class PreconditionError(GeometryError):
    pass


class OutOfScopeError(GeometryError):
    pass


class InternalError(GeometryError):
    pass


class ConfigError(GeometryError):
    pass


class SchemaError(GeometryError):
    """Input JSON does not match the expected shape; `location` points at it."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


class ConstructionError(GeometryError):
    """Construction failed; `witness` names the offending cell."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class NonConvexError(ConstructionError):
    pass


class ValidationError(GeometryError):
    """Raised when an operation needs a valid polyhedron and gets an invalid one."""

    def __init__(self, message: str, report: Optional['Report'] = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Condition:
    """One named check inside a report.

    `passed` is None when the check was skipped because an earlier
    condition already made it meaningless.
    """
    name: str
    passed: Optional[bool]
    witness: Any = None

    def to_dict(self) -> Dict[str, Any]:
        entry: Dict[str, Any] = {'name': self.name, 'pass': self.passed}
        if self.witness is not None:
            entry['witness'] = self.witness
        return entry


@dataclass(frozen=True)
class Report:
    """Result of a check: ordered conditions plus optional metrics."""
    conditions: Tuple[Condition, ...] = ()
    metrics: Optional[Dict[str, Any]] = None

    @property
    def accepted(self) -> bool:
        return all(c.passed for c in self.conditions if c.passed is not None)

    @property
    def verdict(self) -> str:
        return 'ACCEPT' if self.accepted else 'REJECT'

    def condition(self, name: str) -> Condition:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> List[Condition]:
        return [c for c in self.conditions if c.passed is False]

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            'verdict': self.verdict,
            'conditions': [c.to_dict() for c in self.conditions],
        }
        if self.metrics is not None:
            out['metrics'] = self.metrics
        return out


@dataclass(frozen=True)
class Settings:
    """Tolerances and search defaults the checkers pass down.

    The point-model tolerances (quadric, renormalisation, arccosh clamp,
    projective infinity) are fixed module constants.
    """
    ideal_tolerance: float = IDEAL_TOLERANCE
    gluing_tolerance: float = GLUING_TOLERANCE
    strict_tolerance: float = STRICT_TOLERANCE
    planarity_tolerance: float = PLANARITY_TOLERANCE
    congruence_tolerance: float = CONGRUENCE_TOLERANCE
    depth_factor: int = 3
    node_budget: int = 2_000_000

    @classmethod
    def from_file(cls, path: str) -> 'Settings':
        """Read overrides from a dotenv-format file (never from os.environ)."""
        values = dotenv_values(path)
        known = {f.name: f.type for f in fields(cls)}
        overrides: Dict[str, Any] = {}

        for key, raw in values.items():
            if not key.startswith(ENV_PREFIX):
                raise ConfigError(f"{path}: unknown key '{key}'")
            name = key[len(ENV_PREFIX):].lower()
            if name not in known:
                raise ConfigError(f"{path}: unknown key '{key}'")
            if raw is None:
                raise ConfigError(f"{path}: '{key}' has no value")
            try:
                overrides[name] = int(raw) if name in ('depth_factor', 'node_budget') else float(raw)
            except ValueError:
                raise ConfigError(f"{path}: '{key}' is not a number: {raw!r}")

        return replace(cls(), **overrides)

    def as_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class BaseChecker(ABC):
    """Base class for all checkers and builders."""

    name: str = 'checker'

    def __init__(self, settings: Optional[Settings] = None, progress: bool = False):
        self.settings = settings or Settings()
        self.progress = progress

    @abstractmethod
    def run(self, *args, **kwargs) -> Report:
        """Main execution method to be implemented by subclasses."""
        pass
