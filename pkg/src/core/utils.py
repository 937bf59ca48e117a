import json
import logging
import math
from datetime import datetime
from typing import Any, Dict, List

from .base import SchemaError

logger = logging.getLogger("hyperpolar")

LEVELS = {
    'INFO': logging.INFO,
    'SUCCESS': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
}


def log_message(message: str, level: str = "INFO") -> Dict[str, str]:
    """Build a timestamped log entry and forward it to logging."""
    entry = {
        'timestamp': datetime.now().strftime("%H:%M:%S"),
        'level': level,
        'message': message,
    }
    logger.log(LEVELS.get(level, logging.INFO), message)
    return entry


def load_json(path: str) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SchemaError(path, "file not found")
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}:{e.lineno}:{e.colno}", e.msg)


def _jsonable(value: Any) -> Any:
    # numpy scalars/arrays and non-finite floats
    if hasattr(value, 'tolist'):
        return _jsonable(value.tolist())
    if isinstance(value, float):
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def dumps(data: Any) -> str:
    """Deterministic JSON text: sorted keys, full double precision."""
    return json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n"


def dump_json(data: Any, path: str) -> None:
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(dumps(data))


def require(mapping: Any, key: str, location: str) -> Any:
    if not isinstance(mapping, dict):
        raise SchemaError(location, "expected an object")
    if key not in mapping:
        raise SchemaError(f"{location}.{key}", "missing")
    return mapping[key]


def as_number(value: Any, location: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(location, f"expected a number, got {value!r}")
    return float(value)


def as_int(value: Any, location: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(location, f"expected an integer, got {value!r}")
    return value


def as_list(value: Any, location: str) -> List[Any]:
    if not isinstance(value, list):
        raise SchemaError(location, "expected a list")
    return value

