"""
Logging configuration for the Toeplitz framework.

This module provides utilities for configuring logging across the library
and the command-line harness, with support for JSON output, per-run
identifiers and thread-local context (symbol, determinant kind, n) that is
attached to every record emitted inside a sweep.
"""

import json
import logging
import os
import sys
import threading
import uuid
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Dict, Iterator, List, Optional, Union

try:
    # Optional: richer key/value rendering when installed
    import structlog
    STRUCTLOG_AVAILABLE = True
except ImportError:
    STRUCTLOG_AVAILABLE = False

# Constants
DEFAULT_LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DEFAULT_DATE_FORMAT = '%Y-%m-%d %H:%M:%S'
FRAMEWORK_LOGGER = 'toeplitz_framework'

# Environment variable constants
ENV_LOG_LEVEL = "TOEPLITZ_LOG_LEVEL"
ENV_LOG_FORMAT = "TOEPLITZ_LOG_FORMAT"
ENV_LOG_JSON = "TOEPLITZ_LOG_JSON"
ENV_LOG_FILE = "TOEPLITZ_LOG_FILE"

# Thread local storage for context values
_thread_local = threading.local()


def _get_thread_local_dict() -> Dict[str, Any]:
    """Get thread local context dictionary, creating it if it doesn't exist."""
    if not hasattr(_thread_local, 'context'):
        _thread_local.context = {}
    return _thread_local.context


def _get_run_id() -> str:
    """Get or create the run identifier for the current thread."""
    context = _get_thread_local_dict()
    if 'run_id' not in context:
        context['run_id'] = uuid.uuid4().hex[:12]
    return context['run_id']


def _jsonable(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    try:
        json.dumps(value)
        return value
    except (TypeError, ValueError):
        return str(value)


class JsonFormatter(logging.Formatter):
    """
    Log formatter that outputs one JSON object per record.

    Thread-local context values are added with a ``ctx_`` prefix and any
    ``extra`` attributes are serialized (complex numbers as [re, im]).
    """

    _reserved = set(vars(logging.LogRecord('', 0, '', 0, '', (), None)).keys()) | {'message', 'asctime'}

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "lineno": record.lineno,
            "thread": record.threadName,
            "app": "toeplitz-framework",
            "run_id": _get_run_id(),
        }

        context = _get_thread_local_dict()
        for key, value in context.items():
            if key != 'run_id':
                log_data[f"ctx_{key}"] = _jsonable(value)

        if record.exc_info:
            log_data['exc_info'] = self.formatException(record.exc_info)

        for key, value in record.__dict__.items():
            if key not in self._reserved and key not in log_data and not key.startswith('_'):
                log_data[key] = _jsonable(value)

        return json.dumps(log_data)


class _ListHandler(logging.Handler):
    def __init__(self, sink: List[str]):
        super().__init__()
        self.sink = sink

    def emit(self, record: logging.LogRecord) -> None:
        self.sink.append(self.format(record))


@contextmanager
def capture_logs(
    logger_name: str = FRAMEWORK_LOGGER,
    level: int = logging.DEBUG
) -> Iterator[List[str]]:
    """
    Capture records of one logger as "LEVEL - message" strings.

    The logger's level is lowered to ``level`` for the block and restored
    afterwards.
    """
    target = logging.getLogger(logger_name)
    messages: List[str] = []
    handler = _ListHandler(messages)
    handler.setFormatter(logging.Formatter('%(levelname)s - %(message)s'))
    old_level = target.level
    target.setLevel(level)
    target.addHandler(handler)
    try:
        yield messages
    finally:
        target.removeHandler(handler)
        target.setLevel(old_level)


def _configure_structlog(json_logs: bool) -> None:
    """Route structlog through the stdlib handlers configured above."""
    renderer = structlog.processors.JSONRenderer() if json_logs else structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def _env_overrides(log_level: int, log_format: str, json_logs: bool, log_file: Optional[str]):
    """Apply the TOEPLITZ_LOG_* variables on top of the given settings."""
    level_name = os.environ.get(ENV_LOG_LEVEL, "").upper()
    if isinstance(logging.getLevelName(level_name), int):
        log_level = logging.getLevelName(level_name)
    log_format = os.environ.get(ENV_LOG_FORMAT) or log_format
    if os.environ.get(ENV_LOG_JSON, "").lower() in ('1', 'true', 'yes', 'on'):
        json_logs = True
    log_file = os.environ.get(ENV_LOG_FILE) or log_file
    return log_level, log_format, json_logs, log_file


def configure_logging(
    log_level: int = logging.INFO,
    log_file: Optional[str] = None,
    console: bool = True,
    log_format: str = DEFAULT_LOG_FORMAT,
    date_format: str = DEFAULT_DATE_FORMAT,
    json_logs: bool = False,
    log_context: Optional[Dict[str, Any]] = None,
) -> logging.Logger:
    """
    Configure logging for the Toeplitz framework.

    Environment variables TOEPLITZ_LOG_LEVEL, TOEPLITZ_LOG_FORMAT,
    TOEPLITZ_LOG_JSON and TOEPLITZ_LOG_FILE override the arguments.
    Console output goes to stderr so reports written to stdout stay clean.

    Returns:
        The configured root logger.
    """
    log_level, log_format, json_logs, log_file = _env_overrides(log_level, log_format, json_logs, log_file)

    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
    root_logger.setLevel(log_level)

    if log_context:
        _get_thread_local_dict().update(log_context)

    if json_logs:
        formatter = JsonFormatter()
    else:
        formatter = logging.Formatter(log_format, datefmt=date_format)

    if console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        root_logger.addHandler(console_handler)

    if log_file:
        os.makedirs(os.path.dirname(os.path.abspath(log_file)), exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    if STRUCTLOG_AVAILABLE:
        _configure_structlog(json_logs)

    framework_logger = logging.getLogger(FRAMEWORK_LOGGER)
    framework_logger.setLevel(log_level)
    framework_logger.debug("Toeplitz framework logging configured. Level: %s", logging.getLevelName(log_level))

    return root_logger


@contextmanager
def log_context(**context_vars):
    """Context manager that adds context variables to logs within a block."""
    old_context = _get_thread_local_dict().copy()
    _get_thread_local_dict().update(context_vars)
    try:
        yield
    finally:
        _thread_local.context = old_context


def set_run_id(run_id: str) -> None:
    """Set the run identifier for the current thread."""
    _get_thread_local_dict()['run_id'] = run_id


def get_logger(name: str) -> logging.Logger:
    """Get a logger below the framework namespace."""
    if not name.startswith(FRAMEWORK_LOGGER):
        name = f"{FRAMEWORK_LOGGER}.{name}"
    return logging.getLogger(name)


def log_event(
    logger: Union[logging.Logger, str],
    event_name: str,
    level: int = logging.INFO,
    **event_data
) -> None:
    """
    Log a structured event.

    The event fields travel as ``extra`` attributes so the JSON formatter
    emits them as top-level keys; the plain formatter shows key=value pairs.
    """
    if isinstance(logger, str):
        logger = logging.getLogger(logger)
    fields = ", ".join(f"{k}={v}" for k, v in event_data.items())
    extra = {"event": event_name}
    extra.update({k: v for k, v in event_data.items() if k not in JsonFormatter._reserved})
    logger.log(level, "%s: %s", event_name, fields, extra=extra)


def init_logging_from_config(config: Dict[str, Any]) -> logging.Logger:
    """Initialize logging from the ``logging`` section of a sweep config."""
    log_level = config.get('log_level', 'INFO')
    if isinstance(log_level, str):
        log_level = getattr(logging, log_level.upper(), logging.INFO)

    return configure_logging(
        log_level=log_level,
        log_file=config.get('log_file'),
        console=config.get('console_logging', True),
        log_format=config.get('log_format', DEFAULT_LOG_FORMAT),
        date_format=config.get('date_format', DEFAULT_DATE_FORMAT),
        json_logs=config.get('json_logs', False),
        log_context=config.get('log_context', {}),
    )
