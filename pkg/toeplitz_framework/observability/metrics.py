"""
Metrics collection for harness runs.

Counters track identity checks (passed, failed, precondition-skipped),
histograms hold residuals and wall times, and gauges carry the last fitted
decay rate of a convergence sweep. The collector is thread-safe because
sweep points run in a worker pool.
"""

import json
import logging
import os
import threading
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional

import numpy as np

logger = logging.getLogger(__name__)


class MetricType(Enum):
    """Types of metrics supported by the collector."""
    COUNTER = "counter"
    GAUGE = "gauge"
    HISTOGRAM = "histogram"


@dataclass
class MetricDefinition:
    """Definition of a metric for reporting."""
    name: str
    type: MetricType
    description: str = ""
    unit: str = ""
    tags: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result["type"] = self.type.value
        return result


class MetricsCollector:
    """Collects counters, gauges and histograms keyed by name and tag set."""

    def __init__(self, max_history: int = 10000):
        self.enabled = True
        self.max_history = max_history
        self._counters: Dict[str, Dict[str, int]] = {}
        self._gauges: Dict[str, Dict[str, float]] = {}
        self._histograms: Dict[str, Dict[str, List[float]]] = {}
        self._definitions: Dict[str, MetricDefinition] = {}
        self._lock = threading.Lock()

    def _define(self, name: str, metric_type: MetricType, description: str, unit: str = "") -> None:
        if name not in self._definitions:
            self._definitions[name] = MetricDefinition(name, metric_type, description, unit)

    def _get_tag_key(self, tags: Optional[Dict[str, str]] = None) -> str:
        """Convert a tags dictionary to a string key for storage."""
        if not tags:
            return "default"
        return ".".join(f"{k}={v}" for k, v in sorted(tags.items()))

    def increment_counter(
        self,
        name: str,
        value: int = 1,
        tags: Optional[Dict[str, str]] = None,
        description: str = ""
    ) -> None:
        if not self.enabled:
            return
        tag_key = self._get_tag_key(tags)
        with self._lock:
            self._define(name, MetricType.COUNTER, description)
            bucket = self._counters.setdefault(name, {})
            bucket[tag_key] = bucket.get(tag_key, 0) + value

    def set_gauge(
        self,
        name: str,
        value: float,
        tags: Optional[Dict[str, str]] = None,
        description: str = ""
    ) -> None:
        if not self.enabled:
            return
        tag_key = self._get_tag_key(tags)
        with self._lock:
            self._define(name, MetricType.GAUGE, description)
            self._gauges.setdefault(name, {})[tag_key] = float(value)

    def observe_histogram(
        self,
        name: str,
        value: float,
        tags: Optional[Dict[str, str]] = None,
        description: str = "",
        unit: str = ""
    ) -> None:
        if not self.enabled:
            return
        tag_key = self._get_tag_key(tags)
        with self._lock:
            self._define(name, MetricType.HISTOGRAM, description, unit)
            values = self._histograms.setdefault(name, {}).setdefault(tag_key, [])
            values.append(float(value))
            if len(values) > self.max_history:
                del values[:-self.max_history]

    def get_counter(self, name: str, tags: Optional[Dict[str, str]] = None) -> int:
        with self._lock:
            return self._counters.get(name, {}).get(self._get_tag_key(tags), 0)

    def get_gauge(self, name: str, tags: Optional[Dict[str, str]] = None) -> float:
        with self._lock:
            return self._gauges.get(name, {}).get(self._get_tag_key(tags), 0.0)

    @staticmethod
    def _stats(values: List[float]) -> Dict[str, float]:
        if not values:
            return {"count": 0, "min": 0.0, "max": 0.0, "mean": 0.0, "p95": 0.0}
        arr = np.asarray(values)
        return {
            "count": int(arr.size),
            "min": float(arr.min()),
            "max": float(arr.max()),
            "mean": float(arr.mean()),
            "p95": float(np.percentile(arr, 95)),
        }

    def get_histogram_stats(self, name: str, tags: Optional[Dict[str, str]] = None) -> Dict[str, float]:
        """Statistics (count, min, max, mean, p95) for one histogram."""
        with self._lock:
            values = list(self._histograms.get(name, {}).get(self._get_tag_key(tags), []))
        return self._stats(values)

    def get_all_metrics(self) -> Dict[str, Any]:
        with self._lock:
            return {
                "counters": {name: dict(c) for name, c in self._counters.items()},
                "gauges": {name: dict(g) for name, g in self._gauges.items()},
                "histograms": {
                    name: {key: self._stats(values) for key, values in h.items()}
                    for name, h in self._histograms.items()
                },
            }

    def get_all_definitions(self) -> Dict[str, Dict[str, Any]]:
        with self._lock:
            return {name: defn.to_dict() for name, defn in self._definitions.items()}

    def save_metrics_to_file(self, filename: str) -> None:
        """Save current metrics to a JSON file."""
        metrics_data = {
            "timestamp": datetime.now().isoformat(),
            "metrics": self.get_all_metrics(),
            "definitions": self.get_all_definitions(),
        }
        os.makedirs(os.path.dirname(os.path.abspath(filename)), exist_ok=True)
        with open(filename, 'w') as f:
            json.dump(metrics_data, f, indent=2, sort_keys=True)
        logger.info("Saved metrics to %s", filename)

    def clear_metrics(self) -> None:
        with self._lock:
            self._counters.clear()
            self._gauges.clear()
            self._histograms.clear()

    @contextmanager
    def timer(self, name: str, tags: Optional[Dict[str, str]] = None) -> Iterator[Dict[str, float]]:
        """
        Time a block and record the wall time (seconds) in a histogram.

        Yields a dict that receives the elapsed time under ``seconds``.
        """
        result: Dict[str, float] = {}
        start = time.perf_counter()
        try:
            yield result
        finally:
            result["seconds"] = time.perf_counter() - start
            self.observe_histogram(name, result["seconds"], tags, unit="s")


_default_collector: Optional[MetricsCollector] = None
_default_lock = threading.Lock()


def get_metrics_collector() -> MetricsCollector:
    """Process-wide collector used by the harness."""
    global _default_collector
    with _default_lock:
        if _default_collector is None:
            _default_collector = MetricsCollector()
        return _default_collector
