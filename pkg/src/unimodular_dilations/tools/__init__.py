"""Dilation tools shared by the command line and the MCP server."""

from .classification import (
    classify_simplex,
    describe_class,
    describe_square,
    square_report,
)
from .export import (
    boundary_off,
    rows_to_csv,
    rows_to_markdown,
    square_ascii,
    square_svg,
    triangulation_json,
    write_off,
    write_triangulation,
)
from .survey import survey_dilations
from .triangulation import triangulate_polytope, triangulate_simplex
from .utils import (
    handle_dilation_error,
    safe_serialize,
    validate_k,
    validate_pq,
)
from .verification import (
    check_triangulation,
    load_triangulation,
    run_oracles,
    verify_triangulation,
)

# Export all tools
__all__ = [
    # Utilities
    "handle_dilation_error",
    "safe_serialize",
    "validate_k",
    "validate_pq",
    # Classification
    "classify_simplex",
    "describe_class",
    "describe_square",
    "square_report",
    # Triangulation
    "triangulate_polytope",
    "triangulate_simplex",
    # Verification
    "check_triangulation",
    "load_triangulation",
    "run_oracles",
    "verify_triangulation",
    # Survey
    "survey_dilations",
    # Export
    "boundary_off",
    "rows_to_csv",
    "rows_to_markdown",
    "square_ascii",
    "square_svg",
    "triangulation_json",
    "write_off",
    "write_triangulation",
]
