"""
Tests for logging, metrics, schema validation, errors and the log-scale
complex numbers.
"""

import cmath
import json
import logging
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toeplitz_framework.core.exceptions import AccuracyError, ConfigurationError, PoleOnCircleError
from toeplitz_framework.core.logcomplex import LogComplex, identity_residual, log_combination, relative_difference
from toeplitz_framework.observability.logging_config import (
    JsonFormatter,
    configure_logging,
    capture_logs,
    get_logger,
    log_context,
    log_event,
    set_run_id,
)
from toeplitz_framework.observability.metrics import MetricsCollector
from toeplitz_framework.validation import (
    SchemaValidationError,
    SchemaValidator,
    validate_sweep_config,
    validate_symbol_spec,
)

MINIMAL = {"symbol": {"family": "exp", "params": {"t": 0.3}}, "kind": "pure", "n_grid": {"start": 1, "stop": 4}}

nonzero_complex = st.complex_numbers(min_magnitude=1e-100, max_magnitude=1e100, allow_nan=False, allow_infinity=False)


# Test structured events
def test_log_event_capture():
    logger = get_logger("suites")
    assert logger.name == "toeplitz_framework.suites"
    with capture_logs() as messages:
        log_event(logger, "identity_suite_done", passed=True, failed=0)
    assert messages == ["INFO - identity_suite_done: passed=True, failed=0"]


# Test JSON formatting with context
def test_json_formatter_context():
    set_run_id("identities-7")
    record = logging.LogRecord("toeplitz_framework.test", logging.INFO, __file__, 1, "n=%d", (4,), None)
    record.residual = 1e-12 + 0j
    with log_context(symbol="exp", n=4):
        data = json.loads(JsonFormatter().format(record))
    assert data["message"] == "n=4"
    assert data["run_id"] == "identities-7"
    assert data["ctx_symbol"] == "exp" and data["ctx_n"] == 4
    assert data["residual"] == [1e-12, 0.0]


def test_log_context_restores():
    with log_context(kind="pure"):
        with log_context(kind="framed-M"):
            pass
        record = logging.LogRecord("t", logging.INFO, __file__, 1, "m", (), None)
        assert json.loads(JsonFormatter().format(record))["ctx_kind"] == "pure"
    record = logging.LogRecord("t", logging.INFO, __file__, 1, "m", (), None)
    assert "ctx_kind" not in json.loads(JsonFormatter().format(record))


def test_environment_overrides_logging(tmp_path, monkeypatch):
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    monkeypatch.setenv("TOEPLITZ_LOG_LEVEL", "warning")
    monkeypatch.setenv("TOEPLITZ_LOG_FILE", str(tmp_path / "logs" / "run.log"))
    try:
        configure_logging(log_level=logging.DEBUG, console=False)
        assert root.level == logging.WARNING
        assert [type(h) for h in root.handlers] == [logging.FileHandler]
    finally:
        for handler in root.handlers:
            handler.close()
        root.handlers = handlers
        root.setLevel(level)
    assert (tmp_path / "logs" / "run.log").exists()


# Test metrics
def test_metrics_collector():
    collector = MetricsCollector()
    collector.increment_counter("identity.passed", tags={"identity": "lu-factorization"})
    collector.increment_counter("identity.passed", 2, tags={"identity": "lu-factorization"})
    assert collector.get_counter("identity.passed", {"identity": "lu-factorization"}) == 3
    assert collector.get_counter("identity.passed") == 0

    with collector.timer("bench.direct", {"n": "8"}) as timing:
        sum(range(100))
    assert timing["seconds"] >= 0.0
    stats = collector.get_histogram_stats("bench.direct", {"n": "8"})
    assert stats["count"] == 1 and stats["max"] == pytest.approx(timing["seconds"])

    collector.set_gauge("convergence.fitted_decay", -0.69)
    assert collector.get_all_metrics()["gauges"]["convergence.fitted_decay"]["default"] == -0.69
    assert collector.get_all_definitions()["bench.direct"]["type"] == "histogram"
    collector.clear_metrics()
    assert collector.get_counter("identity.passed", {"identity": "lu-factorization"}) == 0


def test_metrics_saved_to_file(tmp_path):
    collector = MetricsCollector()
    collector.observe_histogram("identity.residual", 1e-13)
    path = tmp_path / "metrics" / "run.json"
    collector.save_metrics_to_file(str(path))
    saved = json.loads(path.read_text())
    assert saved["metrics"]["histograms"]["identity.residual"]["default"]["count"] == 1


# Test schema validation
def test_schema_validator():
    validator = SchemaValidator()
    assert validator.validate(MINIMAL) == (True, [])
    is_valid, errors = validator.validate({"kind": "pure", "n_grid": {"start": 1, "stop": 2}})
    assert not is_valid
    assert errors[0].startswith("SweepConfig error")


def test_schema_errors_are_configuration_errors():
    with pytest.raises(ConfigurationError):
        validate_sweep_config(dict(MINIMAL, kind="spiral"))
    with pytest.raises(SchemaValidationError) as info:
        validate_symbol_spec({"family": "bogus"})
    assert "Errors:" in str(info.value)
    assert info.value.errors


# Test error records
def test_error_to_dict():
    record = PoleOnCircleError("pole on the circle", {"pole": 1 + 0j, "n": 3}).to_dict()
    assert record == {"error": "PoleOnCircleError", "message": "pole on the circle", "context": {"pole": "(1+0j)", "n": 3}}
    assert AccuracyError("no convergence", 1e-3).tail_estimate == 1e-3


# Test log-scale complex numbers
@given(nonzero_complex)
def test_logcomplex_roundtrip(value):
    converted = LogComplex.from_complex(value)
    assert -math.pi < converted.phase <= math.pi
    assert converted.to_complex() == pytest.approx(value, rel=1e-12)


@given(nonzero_complex, nonzero_complex)
def test_logcomplex_product(a, b):
    product = LogComplex.from_complex(a) * LogComplex.from_complex(b)
    expected = cmath.log(a) + cmath.log(b)
    assert product.log_modulus == pytest.approx(expected.real, rel=1e-12, abs=1e-12)
    assert relative_difference(product / LogComplex.from_complex(b), LogComplex.from_complex(a)) < 1e-12


def test_logcomplex_zero_and_scale():
    zero = LogComplex.zero()
    assert zero.to_complex() == 0
    assert (zero * LogComplex.one()).is_zero
    assert LogComplex.one().scale(0).is_zero
    assert (zero ** 0).to_complex() == 1
    with pytest.raises(ZeroDivisionError):
        LogComplex.one() / zero
    with pytest.raises(ValueError):
        zero.log()
    assert (-LogComplex.one()).phase == pytest.approx(math.pi)
    assert zero.to_dict() == {"log_modulus": None, "phase": 0.0, "is_zero": True}


def test_log_combination_at_common_scale():
    big = LogComplex(1000.0, 0.0)
    assert log_combination([(1.0, big), (-1.0, big)]).is_zero
    half = log_combination([(0.5, big), (0.25, big)])
    assert half.log_modulus == pytest.approx(1000.0 + math.log(0.75))
    assert identity_residual([(1.0, big)], [(1.0, big)]) == 0.0
