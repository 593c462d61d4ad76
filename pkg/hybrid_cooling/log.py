from __future__ import annotations

import sys
from enum import Enum, auto
from typing import Any, Callable, Mapping


class LogLevel(Enum):
    DEBUG = auto()
    INFO = auto()
    WARN = auto()
    ERROR = auto()


def _severity(lv: LogLevel) -> int:
    return {
        LogLevel.DEBUG: 10,
        LogLevel.INFO: 20,
        LogLevel.WARN: 30,
        LogLevel.ERROR: 40,
    }[lv]


Logger = Callable[[LogLevel, str, Mapping[str, Any]], None]


def make_console_logger(prefix: str = "hybrid-cooling") -> Logger:
    # stderr: CSV output may be going to stdout
    def _log(level: LogLevel, message: str, extra: Mapping[str, Any]) -> None:
        print(f"[{prefix}] {level.name:5s} {message} :: {dict(extra)}", file=sys.stderr)

    return _log


_logger: Logger = make_console_logger()
_log_level: LogLevel = LogLevel.WARN


def set_logger(logger: Logger | None = None, level: LogLevel | None = None) -> None:
    """Replace the process-wide sink and/or threshold.

    Examples:
        ```python
        records = []
        set_logger(lambda lv, msg, extra: records.append((lv, msg)), LogLevel.DEBUG)
        ```
    """
    global _logger, _log_level
    if logger is not None:
        _logger = logger
    if level is not None:
        _log_level = level


def get_logger() -> Logger:
    return _logger


def get_level() -> LogLevel:
    return _log_level


def log(level: LogLevel, message: str, extra: Mapping[str, Any] | None = None) -> None:
    if _severity(level) >= _severity(_log_level):
        _logger(level, message, extra or {})
