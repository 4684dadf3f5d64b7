"""Verification operations - brute-force checks of triangulation files and oracles."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..config import DilationConfigManager
from ..lattice_core import DomainError, Triangulation, dilate, right_angled_vertices
from ..verifier import (
    VerificationReport,
    oracle_k2,
    oracle_white,
    verify_all,
    verify_complex,
    verify_unimodular,
)
from .utils import config_error_response, handle_dilation_error

logger = logging.getLogger(__name__)


def load_triangulation(
    path: Optional[str] = None, data: Optional[Dict[str, Any]] = None
) -> Triangulation:
    if data is None:
        if not path:
            raise DomainError("give a triangulation file or inline data")
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise DomainError(f"{path} is not valid JSON: {e}") from e
    return Triangulation.from_json(data)


def check_triangulation(
    tri: Triangulation,
    region: Optional[List[List[int]]] = None,
    boundary: Optional[str] = None,
    jobs: int = 1,
) -> VerificationReport:
    """Run every applicable check, taking the region from ``region`` or the file's metadata."""
    meta = tri.meta
    unimodular = bool(meta.get("unimodular", True))
    if region is not None:
        points = [tuple(int(c) for c in v) for v in region]
        report = verify_complex(tri, points, jobs=jobs, require_all_points=unimodular)
        return report.merge(verify_unimodular(tri)) if unimodular else report
    if "k" not in meta:
        raise DomainError("no region given and the file carries no dilation factor")
    k = int(meta["k"])
    if "q" in meta:
        simplex = right_angled_vertices(int(meta["q"]))
        style = boundary or tri.boundary_style
        return verify_all(tri, simplex, k, style, jobs=jobs, unimodular=unimodular)
    if "polytope" in meta:
        points = dilate(meta["polytope"], k)
        report = verify_complex(tri, points, jobs=jobs, require_all_points=unimodular)
        return report.merge(verify_unimodular(tri)) if unimodular else report
    raise DomainError("no region given and the file names neither (p, q) nor a polytope")


async def verify_triangulation(
    manager: DilationConfigManager,
    path: Optional[str] = None,
    data: Optional[Dict[str, Any]] = None,
    region: Optional[List[List[int]]] = None,
    boundary: Optional[str] = None,
) -> str:
    """Verify a triangulation file (or inline JSON) and return the report."""
    if not manager.has_required_config():
        return config_error_response(manager)

    try:
        if path and not Path(path).exists() and (manager.output_dir / path).exists():
            path = str(manager.output_dir / path)
        tri = load_triangulation(path, data)
        report = check_triangulation(tri, region, boundary, jobs=manager.jobs)
        logger.info(f"Verification {'passed' if report.passed else 'failed'}: {report.name}")
        return json.dumps(report.to_json(), indent=2, default=str)
    except Exception as e:
        return handle_dilation_error(e, "verify triangulation", {"path": path})


async def run_oracles(
    manager: DilationConfigManager, q_max: int = 13, which: str = "all", box: int = 2
) -> str:
    """Exhaustive classification and second-dilation oracles up to ``q_max``."""
    if which not in ("all", "white", "k2"):
        return json.dumps({"error": f"Unknown oracle {which!r}"}, indent=2)
    if not manager.has_required_config():
        return config_error_response(manager)

    try:
        reports = []
        if which in ("all", "white"):
            reports.append(oracle_white(q_max, box))
        if which in ("all", "k2"):
            reports.append(oracle_k2(max(q_max, 2)))
        report = reports[0]
        for other in reports[1:]:
            report = report.merge(other)
        return json.dumps(report.to_json(), indent=2, default=str)
    except Exception as e:
        return handle_dilation_error(e, "run oracles", {"q_max": q_max, "which": which, "box": box})
