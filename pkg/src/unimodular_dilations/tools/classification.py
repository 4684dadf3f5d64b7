"""Classification operations - white parameters and fundamental-square data."""

import json
import logging
from typing import Callable, List, Optional, Sequence

from ..config import DilationConfigManager
from ..empty_simplex import (
    canonical_p,
    classify,
    is_tetragonal,
    lattice_width,
    white_simplex,
    width_one_pairs,
)
from ..fundamental_square import (
    X_AXIS,
    Y_AXIS,
    crossing_obstruction,
    interior_points,
    latitude_direction,
    longitude_direction,
    maximal_path,
    paths_compatible,
    square_context,
)
from ..lattice_core import (
    AmbientLattice,
    DomainError,
    LatticeSimplex,
    integer_lattice,
    normalized_volume,
)
from .utils import config_error_response, handle_dilation_error, safe_serialize, validate_pq

logger = logging.getLogger(__name__)


def _simplex_from(
    vertices: Optional[Sequence[Sequence[int]]],
    p: Optional[int],
    q: Optional[int],
    lattice: Optional[List[List[int]]] = None,
) -> LatticeSimplex:
    if vertices is not None:
        points = [tuple(int(c) for c in v) for v in vertices]
        if len(points) != 4:
            raise DomainError(f"not a simplex: expected 4 vertices, got {len(points)}")
        basis = AmbientLattice(lattice) if lattice else integer_lattice()
        return LatticeSimplex(tuple(points), basis)
    if p is None or q is None:
        raise DomainError("give either four vertices or the pair (p, q)")
    return white_simplex(p, q)


def describe_class(
    simplex: LatticeSimplex, search_bound: Optional[Callable[[int], int]] = None
) -> dict:
    """Classification summary of an empty simplex as a plain dict."""
    cls = classify(simplex)
    bound = search_bound(cls.q) if search_bound else max(cls.q, 1)
    width = lattice_width(simplex.vertices, simplex.lattice, search_bound=bound)
    canonical = cls.canonical_p
    return {
        "vertices": [list(v) for v in simplex.vertices],
        "q": cls.q,
        "p": cls.p,
        "canonical_p": canonical,
        "normalized_volume": normalized_volume(simplex),
        "unimodular": cls.q == 1,
        "tetragonal": is_tetragonal(cls),
        "width": width.width,
        "width_certified": width.certified,
        "width_one_pairs": width_one_pairs(simplex),
        "to_canonical": {
            "linear": [list(row) for row in cls.to_canonical.linear],
            "translation": safe_serialize(cls.to_canonical.translation),
            "denominator": cls.to_canonical.denominator,
        },
    }


def describe_square(p: int, q: int) -> dict:
    """Interior points, maximal paths and the path obstruction of the fundamental square."""
    ctx = square_context(p, q)
    info = {
        "p": ctx.p,
        "q": ctx.q,
        "canonical_p": canonical_p(ctx.p, ctx.q),
        "interior_points": [list(v) for v in interior_points(ctx)],
    }
    if q < 2:
        info["paths_compatible"] = True
        return info
    obstruction = crossing_obstruction(ctx)
    info.update(
        {
            "latitude_direction": list(latitude_direction(ctx)),
            "longitude_direction": list(longitude_direction(ctx)),
            "maximal_x_path": [list(v) for v in maximal_path(ctx, X_AXIS).points],
            "maximal_y_path": [list(v) for v in maximal_path(ctx, Y_AXIS).points],
            "paths_compatible": paths_compatible(ctx),
            "obstruction": [list(v) for v in obstruction] if obstruction else None,
        }
    )
    return info


async def classify_simplex(
    manager: DilationConfigManager,
    vertices: Optional[List[List[int]]] = None,
    p: Optional[int] = None,
    q: Optional[int] = None,
    lattice: Optional[List[List[int]]] = None,
    include_square: bool = False,
) -> str:
    """Classify an empty lattice tetrahedron, given by vertices or by white parameters."""
    if vertices is None and p is not None and not validate_pq(p, q):
        return json.dumps({"error": f"Invalid white parameters: p={p}, q={q}"}, indent=2)

    if not manager.has_required_config():
        return config_error_response(manager)

    try:
        simplex = _simplex_from(vertices, p, q, lattice)
        result = describe_class(simplex, manager.search_bound)
        if include_square:
            result["square"] = describe_square(result["p"], result["q"])
        logger.info(f"Classified simplex as ({result['p']},{result['q']})")
        return json.dumps(result, indent=2)
    except Exception as e:
        return handle_dilation_error(e, "classify simplex", {"p": p, "q": q, "vertices": vertices})


async def square_report(manager: DilationConfigManager, p: int, q: int) -> str:
    """Fundamental-square summary for the class (p, q)."""
    if not validate_pq(p, q):
        return json.dumps({"error": f"Invalid white parameters: p={p}, q={q}"}, indent=2)

    try:
        return json.dumps(describe_square(p, q), indent=2)
    except Exception as e:
        return handle_dilation_error(e, "describe square", {"p": p, "q": q})

