"""Shared utilities for all dilation tools."""

import json
import logging
import os
from fractions import Fraction
from math import gcd
from typing import Any, Dict

logger = logging.getLogger(__name__)


def safe_serialize(value: Any) -> Any:
    """Turn tuples, enums, fractions and frozensets into JSON-compatible values."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if hasattr(value, "value") and not isinstance(value, dict):
        return value.value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): safe_serialize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [safe_serialize(v) for v in value]
        return sorted(items, key=repr) if isinstance(value, (set, frozenset)) else items
    return str(value)


def handle_dilation_error(e: Exception, operation: str, context: Dict[str, Any] = None) -> str:
    """Centralized error handling for dilation operations."""
    import traceback

    error_context = context or {}
    error_type = type(e).__name__

    logger.error(f"Error in {operation}: {str(e)}", exc_info=True)

    error_response = {
        "error": f"Failed to {operation}: {str(e)}",
        "errorType": error_type,
        "operation": operation,
        **safe_serialize(error_context),
    }

    if os.getenv("DILATIONS_DEBUG") == "true":
        logger.debug(f"Detailed traceback for {operation}: {traceback.format_exc()}")

    return json.dumps(error_response, indent=2)


def validate_pq(p: Any, q: Any) -> bool:
    """White parameters: integers with q >= 1 and gcd(p, q) = 1."""
    if isinstance(p, bool) or isinstance(q, bool):
        return False
    if not isinstance(p, int) or not isinstance(q, int):
        return False
    if q < 1:
        return False
    return q == 1 or gcd(p, q) == 1


def validate_k(k: Any, limit: int = 64) -> bool:
    return isinstance(k, int) and not isinstance(k, bool) and 1 <= k <= limit


def config_error_response(manager: Any) -> str:
    """Error response for settings the environment failed to provide."""
    return json.dumps(
        {
            "error": f"Invalid configuration: {manager.config_error}",
            "errorType": "ValueError",
            "operation": "load configuration",
        },
        indent=2,
    )
