# toeplitz_framework/validation/schema_validator.py
import jsonschema
from typing import List, Dict, Any, Tuple
import logging

from toeplitz_framework.core.exceptions import ConfigurationError
from toeplitz_framework.validation.schemas import SWEEP_CONFIG_SCHEMA, SYMBOL_SPEC_SCHEMA

logger = logging.getLogger(__name__)


class SchemaValidationError(ConfigurationError):
    """Configuration document does not match its JSON schema."""
    def __init__(self, message: str, errors: List[str]):
        super().__init__(message, {"errors": errors})
        self.errors = errors

    def __str__(self):
        return f"{super().__str__()} Errors: {'; '.join(self.errors)}"


class SchemaValidator:
    def __init__(self, schema: Dict[str, Any] = SWEEP_CONFIG_SCHEMA):
        """
        Initializes the SchemaValidator.

        Args:
            schema: A Draft-7 JSON schema; defaults to the sweep-config schema.
        """
        try:
            jsonschema.Draft7Validator.check_schema(schema)
        except jsonschema.SchemaError as e:
            logger.error(f"Invalid schema provided: {e}")
            raise
        self.validator = jsonschema.Draft7Validator(schema)
        self.title = schema.get("title", "document")

    def validate(self, document: Dict[str, Any]) -> Tuple[bool, List[str]]:
        """
        Validates a document.

        Returns:
            A tuple (is_valid, errors_list) with one readable line per error.
        """
        errors = sorted(self.validator.iter_errors(document), key=lambda e: list(e.path))
        messages = [
            f"{self.title} error: {error.message} (path: {'/'.join(map(str, error.path)) or '<root>'})"
            for error in errors
        ]
        return not messages, messages

    def validate_and_raise(self, document: Dict[str, Any]) -> None:
        """Validates a document and raises SchemaValidationError if invalid."""
        is_valid, errors = self.validate(document)
        if not is_valid:
            raise SchemaValidationError(f"{self.title} validation failed", errors)


def validate_sweep_config(document: Dict[str, Any]) -> None:
    SchemaValidator(SWEEP_CONFIG_SCHEMA).validate_and_raise(document)


def validate_symbol_spec(document: Dict[str, Any]) -> None:
    SchemaValidator(SYMBOL_SPEC_SCHEMA).validate_and_raise(document)
