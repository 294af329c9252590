"""
Observability components for the Toeplitz framework.

This package contains the logging configuration and the metrics collector
used by the harness.
"""

from toeplitz_framework.observability.logging_config import (
    configure_logging,
    capture_logs,
    log_context,
    log_event,
)
from toeplitz_framework.observability.metrics import MetricsCollector, get_metrics_collector

__all__ = [
    'configure_logging',
    'capture_logs',
    'log_context',
    'log_event',
    'MetricsCollector',
    'get_metrics_collector',
]
