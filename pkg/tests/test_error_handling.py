"""Test our error response format and input validation."""

import json
from fractions import Fraction

import pytest

from unimodular_dilations.lattice_core import DomainError, InternalError
from unimodular_dilations.tools import (
    handle_dilation_error,
    safe_serialize,
    validate_k,
    validate_pq,
)


def test_our_error_response_structure():
    """Test OUR error response format and structure."""
    error = DomainError("k=7 requires quasi-standard boundary")
    result = handle_dilation_error(error, "triangulate dilation", {"p": 2, "q": 5, "k": 7})

    data = json.loads(result)
    assert data["error"] == "Failed to triangulate dilation: k=7 requires quasi-standard boundary"
    assert data["errorType"] == "DomainError"
    assert data["operation"] == "triangulate dilation"
    assert (data["p"], data["q"], data["k"]) == (2, 5, 7)


@pytest.mark.parametrize(
    "error,expected_type",
    [
        (DomainError("domain"), "DomainError"),
        (InternalError("internal"), "InternalError"),
        (ValueError("value"), "ValueError"),
        (KeyError("key"), "KeyError"),
    ],
)
def test_our_error_type_handling(error, expected_type):
    """Test our error type classification."""
    data = json.loads(handle_dilation_error(error, "test operation"))
    assert data["errorType"] == expected_type
    assert "Failed to test operation:" in data["error"]


def test_our_error_context_is_serialized():
    """Test our context inclusion with tuples and fractions."""
    context = {"vertices": ((0, 0, 0), (1, 0, 0)), "ratio": Fraction(1, 3)}
    data = json.loads(handle_dilation_error(Exception("bad"), "classify simplex", context))
    assert data["vertices"] == [[0, 0, 0], [1, 0, 0]]
    assert data["ratio"] == "1/3"


def test_our_safe_serialize():
    assert safe_serialize({(1, 2): frozenset({3, 1})}) == {"(1, 2)": [1, 3]}
    assert safe_serialize(None) is None


@pytest.mark.parametrize(
    "p,q,ok",
    [
        (2, 5, True),
        (0, 1, True),
        (-1, 5, True),
        (2, 4, False),
        (1, 0, False),
        (True, 5, False),
        ("2", 5, False),
    ],
)
def test_our_pq_validation(p, q, ok):
    assert validate_pq(p, q) is ok


@pytest.mark.parametrize("k,ok", [(1, True), (64, True), (0, False), (65, False), (2.0, False)])
def test_our_k_validation(k, ok):
    assert validate_k(k) is ok
