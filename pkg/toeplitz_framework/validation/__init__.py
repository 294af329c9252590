"""
Validation of configuration documents against JSON schemas.
"""

from toeplitz_framework.validation.schema_validator import (
    SchemaValidationError,
    SchemaValidator,
    validate_sweep_config,
    validate_symbol_spec,
)
from toeplitz_framework.validation.schemas import SWEEP_CONFIG_SCHEMA, SYMBOL_SPEC_SCHEMA

__all__ = [
    'SchemaValidationError',
    'SchemaValidator',
    'validate_sweep_config',
    'validate_symbol_spec',
    'SWEEP_CONFIG_SCHEMA',
    'SYMBOL_SPEC_SCHEMA',
]
