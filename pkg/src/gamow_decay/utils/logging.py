"""
Logging configuration and utilities for gamow-decay.

Provides the formatters, the performance timer, and the dictConfig-based setup
used by the library and the CLI. All console output goes to stderr so data
files and stdout stay free of diagnostics.

Features:
- Structured JSON logging for machine consumption
- Human-readable console logging with level colours on a TTY
- Per-thread run context (subcommand, seed) attached to every record
- Timing of pipeline steps via PerformanceLogger
"""

import json
import logging
import logging.config
import os
import sys
import threading
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, Optional, TypeVar, Union

ROOT_LOGGER_NAME = "gamow_decay"

_run_context = threading.local()

_RESERVED_RECORD_KEYS = frozenset({
    'name', 'msg', 'args', 'levelname', 'levelno', 'pathname', 'filename',
    'module', 'exc_info', 'exc_text', 'stack_info', 'lineno', 'funcName',
    'created', 'msecs', 'relativeCreated', 'thread', 'threadName',
    'processName', 'process', 'taskName', 'message', 'asctime',
})

F = TypeVar("F", bound=Callable[..., Any])


def current_run_context() -> Dict[str, Any]:
    """Return the run context bound to the calling thread."""
    return dict(getattr(_run_context, 'context', {}))


@contextmanager
def run_context(**context: Any) -> Iterator[None]:
    """
    Bind key/value context (e.g. subcommand, seed) to log records on this thread.

    Nested uses merge; the previous context is restored on exit.
    """
    previous = getattr(_run_context, 'context', None)
    merged = dict(previous or {})
    merged.update(context)
    _run_context.context = merged
    try:
        yield
    finally:
        if previous is None:
            del _run_context.context
        else:
            _run_context.context = previous


class JSONFormatter(logging.Formatter):
    """Formats log records as single-line JSON objects."""

    def __init__(
        self,
        include_run_context: bool = True,
        extra_fields: Optional[Dict[str, str]] = None
    ):
        super().__init__()
        self.include_run_context = include_run_context
        self.extra_fields = extra_fields or {}

    def format(self, record: logging.LogRecord) -> str:
        log_entry: Dict[str, Any] = {
            'timestamp': datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno,
        }

        if record.exc_info:
            log_entry['exception'] = {
                'type': record.exc_info[0].__name__ if record.exc_info[0] else None,
                'message': str(record.exc_info[1]) if record.exc_info[1] else None,
                'traceback': self.formatException(record.exc_info),
            }

        if self.include_run_context:
            context = current_run_context()
            if context:
                log_entry['run'] = context

        for key, value in record.__dict__.items():
            if key not in _RESERVED_RECORD_KEYS and not key.startswith('_'):
                log_entry[key] = value

        log_entry.update(self.extra_fields)
        return json.dumps(log_entry, ensure_ascii=False, separators=(',', ':'), default=str)


class ConsoleFormatter(logging.Formatter):
    """Human-readable formatter with optional level colours and run context."""

    COLORS = {
        'DEBUG': '\033[36m',
        'INFO': '\033[32m',
        'WARNING': '\033[33m',
        'ERROR': '\033[31m',
        'CRITICAL': '\033[35m',
        'RESET': '\033[0m'
    }

    def __init__(
        self,
        include_colors: bool = True,
        include_run_context: bool = True,
        format_string: Optional[str] = None
    ):
        if format_string is None:
            format_string = '%(asctime)s | %(levelname)-8s | %(name)-28s | %(message)s'
        super().__init__(format_string)
        self.include_colors = include_colors and self._supports_color()
        self.include_run_context = include_run_context

    @staticmethod
    def _supports_color() -> bool:
        return (
            hasattr(sys.stderr, 'isatty') and sys.stderr.isatty()
            and os.environ.get('TERM') != 'dumb'
        )

    def format(self, record: logging.LogRecord) -> str:
        formatted = super().format(record)

        if self.include_run_context:
            context = current_run_context()
            if context:
                tags = ",".join(f"{k}={v}" for k, v in sorted(context.items()))
                formatted = f"{formatted} [{tags}]"

        if self.include_colors:
            color = self.COLORS.get(record.levelname, '')
            formatted = f"{color}{formatted}{self.COLORS['RESET']}"

        return formatted


class PerformanceLogger:
    """
    Measures and logs the wall time of named operations.

    Timings are logged at DEBUG on success and WARNING on failure.
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or get_logger("performance")

    @contextmanager
    def measure_time(self, operation: str, **context: Any) -> Iterator[Dict[str, Any]]:
        """
        Context manager for measuring operation execution time.

        Args:
            operation: Name of the operation being measured
            **context: Additional context to include in logs

        Yields:
            Dictionary that receives duration information on exit
        """
        start_time = time.perf_counter()
        timing_info: Dict[str, Any] = {'operation': operation}
        success = False
        try:
            yield timing_info
            success = True
        except Exception as e:
            timing_info['error'] = str(e)
            raise
        finally:
            duration = time.perf_counter() - start_time
            timing_info.update({
                'duration_seconds': duration,
                'duration_ms': duration * 1000,
                'success': success
            })
            self.logger.log(
                logging.DEBUG if success else logging.WARNING,
                "Operation '%s' %s in %.2fms",
                operation,
                "completed" if success else "failed",
                duration * 1000,
                extra={
                    'performance_operation': operation,
                    'performance_duration_ms': duration * 1000,
                    'performance_success': success,
                    **context
                }
            )

    def timed_operation(self, operation_name: Optional[str] = None) -> Callable[[F], F]:
        """
        Decorator for timing function execution.

        Args:
            operation_name: Name for the operation (defaults to the qualified function name)
        """
        def decorator(func: F) -> F:
            op_name = operation_name or f"{func.__module__}.{func.__name__}"

            @wraps(func)
            def wrapper(*args: Any, **kwargs: Any) -> Any:
                with self.measure_time(op_name):
                    return func(*args, **kwargs)
            return wrapper  # type: ignore[return-value]
        return decorator


def get_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """
    Get a logger under the package namespace.

    Args:
        name: Logger name (typically the module's __name__)
        level: Optional logging level override

    Returns:
        Logger named "gamow_decay.<name>" (the prefix is not duplicated)
    """
    if name == ROOT_LOGGER_NAME or name.startswith(ROOT_LOGGER_NAME + "."):
        full_name = name
    else:
        full_name = f"{ROOT_LOGGER_NAME}.{name}"
    logger = logging.getLogger(full_name)
    if level:
        logger.setLevel(getattr(logging, level.upper()))
    return logger


def configure_logging(
    level: str = "WARNING",
    log_file: Optional[Union[str, Path]] = None,
    enable_console: bool = True,
    enable_structured: bool = False,
    force: bool = False
) -> Dict[str, Any]:
    """
    Configure logging for the package.

    Args:
        level: Package logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional file path that receives DEBUG-and-above records
        enable_console: Whether to log to stderr
        enable_structured: Whether to emit JSON instead of human-readable lines
        force: Whether to drop handlers already attached to package loggers

    Returns:
        The dictConfig dictionary that was applied
    """
    formatter_name = 'json' if enable_structured else 'console'
    config: Dict[str, Any] = {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'json': {'()': JSONFormatter, 'include_run_context': True},
            'console': {'()': ConsoleFormatter, 'include_colors': True},
            'detailed': {
                'format': '%(asctime)s | %(levelname)-8s | %(name)s | '
                          '%(funcName)s:%(lineno)d | %(message)s',
                'datefmt': '%Y-%m-%d %H:%M:%S'
            },
        },
        'handlers': {},
        'loggers': {
            ROOT_LOGGER_NAME: {
                'level': level.upper(),
                'handlers': [],
                'propagate': False
            }
        },
    }

    if enable_console:
        config['handlers']['console'] = {
            'class': 'logging.StreamHandler',
            'level': level.upper(),
            'formatter': formatter_name,
            'stream': 'ext://sys.stderr'
        }
        config['loggers'][ROOT_LOGGER_NAME]['handlers'].append('console')

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        config['handlers']['file'] = {
            'class': 'logging.FileHandler',
            'level': 'DEBUG',
            'formatter': 'json' if enable_structured else 'detailed',
            'filename': str(log_path),
            'mode': 'a',
            'encoding': 'utf-8'
        }
        config['loggers'][ROOT_LOGGER_NAME]['handlers'].append('file')
        # the package logger must pass DEBUG records to the file handler
        config['loggers'][ROOT_LOGGER_NAME]['level'] = 'DEBUG'

    if force:
        for logger_name in list(logging.Logger.manager.loggerDict):
            if logger_name.startswith(ROOT_LOGGER_NAME):
                logging.getLogger(logger_name).handlers.clear()

    logging.config.dictConfig(config)
    return config


performance_logger = PerformanceLogger()

timed = performance_logger.timed_operation
