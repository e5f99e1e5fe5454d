from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Any, Dict, Union

from loewnerlab.utils import get_current_timestamp


class LogLevel(str, Enum):
    TRACE = "TRACE"
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"

    @property
    def severity(self) -> int:
        return _SEVERITY[self]


_SEVERITY = {
    LogLevel.TRACE: 0,
    LogLevel.DEBUG: 10,
    LogLevel.INFO: 20,
    LogLevel.WARNING: 30,
    LogLevel.ERROR: 40,
}


class Log:
    timestamp: datetime
    body: str
    level: LogLevel
    attributes: Dict[str, str]

    def __init__(self, body: str, level: LogLevel, attributes: Dict[str, Any]):
        self.timestamp = get_current_timestamp()
        self.body = body
        self.level = level
        self.attributes = {str(k): _render(v) for k, v in attributes.items()}

    def __str__(self) -> str:
        attributes_str = " ".join(f"{k}={v}" for k, v in self.attributes.items())
        return f"{self.body} {attributes_str}".strip()


def _render(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, complex):
        return f"{value.real:.6g}{value.imag:+.6g}j"
    return str(value)


@dataclass(frozen=True)
class Alive:
    """Point evolution reached the end of the interval; `point` is g_t1(z0)."""

    point: complex


@dataclass(frozen=True)
class Captured:
    """Point evolution hit the driving function at `capture_time`."""

    capture_time: float
    gap: float


Evolution = Union[Alive, Captured]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one acceptance check."""

    name: str
    passed: bool
    detail: str = ""
