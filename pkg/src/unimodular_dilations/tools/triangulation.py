"""Triangulation operations - dilated empty simplices and lattice polytopes."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..config import DilationConfigManager
from ..dilation import BoundaryStyle
from ..lattice_core import AmbientLattice, Triangulation, integer_lattice
from ..polytope_pipeline import LatticePolytope, triangulate_dilation
from .export import write_off, write_triangulation
from .utils import config_error_response, handle_dilation_error, validate_k, validate_pq

logger = logging.getLogger(__name__)


def summarize(tri: Triangulation) -> Dict[str, Any]:
    """Counts and metadata of a triangulation, without the cell list."""
    return {
        "method": tri.meta.get("method"),
        "plan": tri.meta.get("plan"),
        "boundary_style": tri.boundary_style,
        "k": tri.meta.get("k"),
        "p": tri.meta.get("p"),
        "q": tri.meta.get("q"),
        "cells": len(tri.tetrahedra),
        "vertices": len(tri.vertices),
        "unimodular": tri.meta.get("unimodular", True),
    }


def _write_outputs(
    manager: DilationConfigManager,
    tri: Triangulation,
    output: Optional[str],
    off: Optional[str],
) -> Dict[str, str]:
    written = {}
    if output:
        written["output"] = str(write_triangulation(tri, manager.output_dir / Path(output)))
    if off:
        written["off"] = str(write_off(tri, manager.output_dir / Path(off)))
    return written


async def triangulate_simplex(
    manager: DilationConfigManager,
    p: int,
    q: int,
    k: int,
    boundary: str = "standard",
    output: Optional[str] = None,
    off: Optional[str] = None,
    height: Optional[int] = None,
) -> str:
    """Triangulate k times the right-angled tetrahedron of class (p, q)."""
    if not validate_pq(p, q):
        return json.dumps({"error": f"Invalid white parameters: p={p}, q={q}"}, indent=2)
    if not validate_k(k):
        return json.dumps({"error": f"Invalid dilation factor: k={k}"}, indent=2)

    if not manager.has_required_config():
        return config_error_response(manager)

    try:
        style = BoundaryStyle.parse(boundary)
        tri = manager.get_triangulation(p, q, k, style, height)
        result = summarize(tri)
        result["expected_cells"] = k**3 * q if result["unimodular"] else None
        result.update(_write_outputs(manager, tri, output, off))
        return json.dumps(result, indent=2)
    except Exception as e:
        return handle_dilation_error(
            e, "triangulate dilation", {"p": p, "q": q, "k": k, "boundary": boundary}
        )


async def triangulate_polytope(
    manager: DilationConfigManager,
    vertices: List[List[int]],
    k: int,
    boundary: str = "standard",
    lattice: Optional[List[List[int]]] = None,
    dissection: bool = False,
    output: Optional[str] = None,
    off: Optional[str] = None,
) -> str:
    """Triangulate k times a lattice polytope cell by cell."""
    if not validate_k(k):
        return json.dumps({"error": f"Invalid dilation factor: k={k}"}, indent=2)

    if not manager.has_required_config():
        return config_error_response(manager)

    try:
        basis = AmbientLattice(lattice) if lattice else integer_lattice()
        polytope = LatticePolytope(tuple(tuple(v) for v in vertices), basis)
        tri = triangulate_dilation(polytope, k, boundary, dissection, jobs=manager.jobs)
        result = summarize(tri)
        result["initial_cells"] = tri.meta.get("cells")
        result["classes"] = tri.meta.get("classes")
        result.update(_write_outputs(manager, tri, output, off))
        return json.dumps(result, indent=2)
    except Exception as e:
        return handle_dilation_error(
            e, "triangulate polytope", {"k": k, "boundary": boundary, "dissection": dissection}
        )
