"""Survey operations - sweep classes and dilation factors into a coverage table."""

import json
import logging
import time
from math import gcd
from typing import Any, Dict, List

from ..config import DilationConfigManager
from ..dilation import BoundaryStyle, dispatch, run_plan
from ..empty_simplex import canonical_p
from ..lattice_core import DomainError, right_angled_vertices
from ..verifier import verify_all
from .export import rows_to_csv, rows_to_markdown
from .utils import config_error_response, handle_dilation_error

logger = logging.getLogger(__name__)

SURVEY_COLUMNS = (
    "p",
    "q",
    "k",
    "style",
    "method",
    "cells",
    "boundary",
    "passed",
    "seconds",
    "note",
)

QUASI_FACTORS = (7, 11)


def survey_classes(q_max: int) -> List[tuple]:
    """One (p, q) per class, with p the canonical representative."""
    out = [(0, 1)]
    for q in range(2, q_max + 1):
        out.extend((p, q) for p in range(1, q) if gcd(p, q) == 1 and canonical_p(p, q) == p)
    return out


def auto_style(k: int) -> BoundaryStyle:
    return BoundaryStyle.QUASI_STANDARD if k in QUASI_FACTORS else BoundaryStyle.STANDARD


def survey_row(
    p: int, q: int, k: int, style: BoundaryStyle, verify: bool, jobs: int
) -> Dict[str, Any]:
    row: Dict[str, Any] = {"p": p, "q": q, "k": k, "style": style.value}
    start = time.perf_counter()
    try:
        plan = dispatch(p, q, k, style)
    except DomainError as e:
        row["note"] = str(e)
        return row
    tri = run_plan(plan)
    row["method"] = plan.describe()
    row["cells"] = len(tri.tetrahedra)
    if verify:
        unimodular = bool(tri.meta.get("unimodular", True))
        report = verify_all(tri, right_angled_vertices(q), k, style.value, jobs, unimodular)
        row["boundary"] = next(
            (ok for name, ok in report.checks.items() if name.startswith("boundary[")), None
        )
        row["passed"] = report.passed
        if not report.passed:
            row["note"] = ", ".join(name for name, ok in report.checks.items() if not ok)
    row["seconds"] = round(time.perf_counter() - start, 3)
    return row


async def survey_dilations(
    manager: DilationConfigManager,
    q_max: int = 7,
    k_max: int = 13,
    k_min: int = 1,
    style: str = "auto",
    verify: bool = True,
    fmt: str = "json",
) -> str:
    """Build (and optionally verify) every class with q <= q_max for k in [k_min, k_max]."""
    if q_max < 1 or k_min < 1 or k_max < k_min:
        return json.dumps(
            {"error": f"Invalid survey bounds: q_max={q_max}, k={k_min}..{k_max}"}, indent=2
        )
    if fmt not in ("json", "csv", "markdown"):
        return json.dumps({"error": f"Unknown format {fmt!r}"}, indent=2)

    if not manager.has_required_config():
        return config_error_response(manager)

    try:
        fixed = None if style == "auto" else BoundaryStyle.parse(style)
        rows = []
        for p, q in survey_classes(q_max):
            for k in range(k_min, k_max + 1):
                row = survey_row(p, q, k, fixed or auto_style(k), verify, manager.jobs)
                logger.debug(f"Survey row {row}")
                rows.append(row)
        failed = [r for r in rows if r.get("passed") is False]
        result: Dict[str, Any] = {
            "rows": len(rows),
            "built": sum(1 for r in rows if "cells" in r),
            "failed": len(failed),
        }
        if fmt == "csv":
            result["table"] = rows_to_csv(rows, SURVEY_COLUMNS)
        elif fmt == "markdown":
            result["table"] = rows_to_markdown(rows, SURVEY_COLUMNS)
        else:
            result["results"] = rows
        return json.dumps(result, indent=2)
    except Exception as e:
        return handle_dilation_error(
            e, "survey dilations", {"q_max": q_max, "k_max": k_max, "style": style}
        )
