from typing import Any, Dict, Optional

from loewnerlab.attributes import merge_attributes
from loewnerlab.instance import get_config
from loewnerlab.passthrough import Passthrough
from loewnerlab.types import Log, LogLevel

_passthrough = Passthrough()


def _send(message: str, level: LogLevel, attributes: Optional[Dict[str, Any]]) -> None:
    config = get_config()
    if config.noop or not config.passthrough:
        return
    if level.severity < config.log_level.severity:
        return
    log = Log(message, level, merge_attributes(config.attributes, attributes or {}))
    _passthrough.log_passthrough(log)


def log_info(message: str, attributes: Optional[Dict[str, Any]] = None):
    """
    Logs an info message.

    Args:
        message (str): The message to log.
        attributes (Dict[str, Any]): The attributes to log.

    Usage:
        log_info("trace solved", {"steps": 1000})
    """
    _send(message, LogLevel.INFO, attributes)


def log_error(message: str, attributes: Optional[Dict[str, Any]] = None):
    """Logs an error message."""
    _send(message, LogLevel.ERROR, attributes)


def log_warn(message: str, attributes: Optional[Dict[str, Any]] = None):
    """Logs a warning message."""
    _send(message, LogLevel.WARNING, attributes)


def log_debug(message: str, attributes: Optional[Dict[str, Any]] = None):
    """Logs a debug message."""
    _send(message, LogLevel.DEBUG, attributes)


def log_trace(message: str, attributes: Optional[Dict[str, Any]] = None):
    """Logs a trace message."""
    _send(message, LogLevel.TRACE, attributes)
