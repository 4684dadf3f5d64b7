"""File formats: triangulation JSON, boundary OFF, survey tables and square diagrams."""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..fundamental_square import (
    KIND_PAIR,
    KIND_RISING,
    KIND_X,
    KIND_Y,
    X_AXIS,
    Y_AXIS,
    SquareContext,
    compatible_quasi_maximal_pair,
    crossing_obstruction,
    interior_points,
    maximal_path,
    paths_compatible,
    square_triangulation,
)
from ..lattice_core import DomainError, Triangulation, orientation
from .utils import safe_serialize

logger = logging.getLogger(__name__)

PATH_COLORS = {X_AXIS: "#c0392b", Y_AXIS: "#2471a3"}


def triangulation_json(tri: Triangulation) -> str:
    """Deterministic JSON text for a triangulation."""
    return json.dumps(safe_serialize(tri.to_json()), indent=2, sort_keys=True) + "\n"


def write_triangulation(tri: Triangulation, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(triangulation_json(tri))
    logger.info(f"Wrote {len(tri.tetrahedra)} cells to {path}")
    return path


def boundary_off(tri: Triangulation) -> str:
    """Boundary surface as OFF text, triangles oriented outwards."""
    faces: Dict[tuple, Optional[tuple]] = {}
    for cell in tri.cells():
        for i in range(4):
            a, b, c = (v for j, v in enumerate(cell) if j != i)
            key = tuple(sorted((a, b, c)))
            if key in faces:
                faces[key] = None
                continue
            faces[key] = (a, c, b) if orientation(a, b, c, cell[i]) > 0 else (a, b, c)
    triangles = [faces[key] for key in sorted(faces) if faces[key] is not None]
    vertices = sorted({v for t in triangles for v in t})
    index = {v: i for i, v in enumerate(vertices)}
    lines = ["OFF", f"{len(vertices)} {len(triangles)} 0"]
    lines += [" ".join(str(c) for c in v) for v in vertices]
    lines += ["3 " + " ".join(str(index[v]) for v in t) for t in triangles]
    return "\n".join(lines) + "\n"


def write_off(tri: Triangulation, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(boundary_off(tri))
    return path


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


def rows_to_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: _cell(row.get(c)) for c in columns})
    return buffer.getvalue()


def rows_to_markdown(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    lines = [
        "| " + " | ".join(columns) + " |",
        "|" + "|".join("---" for _ in columns) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(_cell(row.get(c)) for c in columns) + " |")
    return "\n".join(lines) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value).replace("|", "/")


# ---------------------------------------------------------------------------
# Square diagrams
# ---------------------------------------------------------------------------


def _square_paths(ctx: SquareContext, kind: str) -> Dict[str, List[tuple]]:
    if ctx.q < 2:
        return {}
    if kind == KIND_PAIR:
        x_path, y_path = compatible_quasi_maximal_pair(ctx)
        return {X_AXIS: list(x_path.points), Y_AXIS: list(y_path.points)}
    return {
        X_AXIS: list(maximal_path(ctx, X_AXIS).points),
        Y_AXIS: list(maximal_path(ctx, Y_AXIS).points),
    }


def square_svg(ctx: SquareContext, kind: str = KIND_Y, cell: int = 32) -> str:
    """SVG drawing of the fundamental square: triangulation, maximal paths, lattice points."""
    if kind not in (KIND_X, KIND_Y, KIND_PAIR):
        raise DomainError(f"unknown square kind {kind!r}")
    q = ctx.q
    size = q * cell
    pad = cell // 2

    def xy(point):
        return pad + point[0] * cell, pad + (q - point[1]) * cell

    tri = square_triangulation(ctx, kind if q > 1 else KIND_RISING)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * pad}" '
        f'height="{size + 2 * pad}" viewBox="0 0 {size + 2 * pad} {size + 2 * pad}">',
        f'<rect x="{pad}" y="{pad}" width="{size}" height="{size}" '
        'fill="none" stroke="black" stroke-width="2"/>',
    ]
    for a, b in sorted(tri.edges()):
        (x1, y1), (x2, y2) = xy(a), xy(b)
        parts.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#999" stroke-width="1"/>'
        )
    for axis, points in _square_paths(ctx, kind).items():
        coords = " ".join(f"{x},{y}" for x, y in map(xy, points))
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{PATH_COLORS[axis]}" '
            f'stroke-width="3" opacity="0.7"><title>maximal {axis}-path</title></polyline>'
        )
    for point in tri.points:
        x, y = xy(point)
        parts.append(f'<circle cx="{x}" cy="{y}" r="4" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def square_ascii(ctx: SquareContext) -> str:
    """Grid of the square with 'o' at interior points and '+' at corners, top row first."""
    q = ctx.q
    inside = set(interior_points(ctx))
    corners = {(0, 0), (q, 0), (0, q), (q, q)}
    rows = []
    for y in range(q, -1, -1):
        row = []
        for x in range(q + 1):
            if (x, y) in corners:
                row.append("+")
            elif (x, y) in inside:
                row.append("o")
            else:
                row.append(".")
        rows.append(f"{y:>3} " + " ".join(row))
    lines = [f"fundamental square p={ctx.p} q={q}"] + rows
    if q > 1:
        lines.append(f"Y-path: {maximal_path(ctx, Y_AXIS).points}")
        lines.append(f"X-path: {maximal_path(ctx, X_AXIS).points}")
        obstruction = crossing_obstruction(ctx)
        lines.append(f"compatible: {paths_compatible(ctx)}")
        if obstruction:
            lines.append(f"crossing edges: {obstruction[:2]} x {obstruction[2:]}")
    return "\n".join(lines) + "\n"
