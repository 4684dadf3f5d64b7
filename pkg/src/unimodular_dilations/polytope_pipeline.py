"""Unimodular triangulations of kP for arbitrary lattice 3-polytopes P.

P is first cut into empty tetrahedra (a placing triangulation using every lattice point),
then every cell is dilated, triangulated in its right-angled frame and mapped back.
Boundary-compatible constructions make neighbouring cells agree on their shared faces.
"""

import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .dilation import BoundaryStyle, DilationPlan, Method, dispatch, model_to_cell, run_plan
from .empty_simplex import EmptyClass, classify, is_empty
from .lattice_core import (
    AffineLatticeMap,
    AmbientLattice,
    Cell,
    DomainError,
    InternalError,
    LatticeSimplex,
    Point,
    Triangulation,
    affine_rank,
    integer_lattice,
    lattice_points_in,
    orientation,
    quasi_standard_face,
    standard_face_edges,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of ``vertices`` with respect to ``lattice``."""

    vertices: Tuple[Point, ...]
    lattice: AmbientLattice = field(default_factory=integer_lattice)

    def __post_init__(self):
        verts = tuple(tuple(int(c) for c in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 4 or affine_rank(verts) < 3:
            raise DomainError("polytope is not full-dimensional")
        for v in verts:
            if not self.lattice.contains(v):
                raise DomainError(f"vertex {v} is not a lattice point")

    def coordinates(self) -> List[Point]:
        """Vertices in integer coordinates of the lattice basis."""
        to_coords = self.lattice.coordinate_map()
        return [to_coords.apply(v) for v in self.vertices]

    def basis_map(self) -> AffineLatticeMap:
        return AffineLatticeMap(self.lattice.basis)

    @classmethod
    def from_json(cls, data: Dict[str, object]) -> "LatticePolytope":
        try:
            vertices = tuple(tuple(int(c) for c in v) for v in data["vertices"])
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"malformed polytope data: {e}") from e
        basis = data.get("lattice")
        lattice = AmbientLattice(basis) if basis else integer_lattice()
        return cls(vertices, lattice)


@dataclass
class CellComplex:
    """Empty tetrahedra of P in lattice coordinates, tagged with their classes."""

    vertices: List[Point]
    tetrahedra: List[Tuple[int, int, int, int]]
    classes: List[EmptyClass] = field(default_factory=list)

    def cells(self) -> List[Cell]:
        v = self.vertices
        return [(v[a], v[b], v[c], v[d]) for a, b, c, d in self.tetrahedra]


# ---------------------------------------------------------------------------
# Placing triangulation
# ---------------------------------------------------------------------------


def _initial_simplex(points: Sequence[Point]) -> List[int]:
    chosen = [0]
    for i in range(1, len(points)):
        if affine_rank([points[j] for j in chosen] + [points[i]]) == len(chosen):
            chosen.append(i)
            if len(chosen) == 4:
                return chosen
    raise DomainError("points are not full-dimensional")


def _contains(cell: Cell, v: Point) -> bool:
    total = orientation(*cell)
    for i in range(4):
        replaced = list(cell)
        replaced[i] = v
        if orientation(*replaced) * total < 0:
            return False
    return True


def _boundary_faces(cells: List[Cell]) -> Dict[Tuple[Point, ...], Point]:
    """Faces lying in exactly one cell, mapped to the opposite vertex of that cell."""
    seen: Dict[Tuple[Point, ...], Optional[Point]] = {}
    for cell in cells:
        for i in range(4):
            face = tuple(sorted(v for j, v in enumerate(cell) if j != i))
            seen[face] = None if face in seen else cell[i]
    return {face: apex for face, apex in seen.items() if apex is not None}


def _insert(cells: List[Cell], v: Point) -> List[Cell]:
    holders = [cell for cell in cells if _contains(cell, v)]
    if holders:
        # stellar subdivision of every cell whose closure contains v
        out = [cell for cell in cells if cell not in holders]
        for cell in holders:
            for i in range(4):
                replaced = list(cell)
                replaced[i] = v
                if orientation(*replaced) != 0:
                    out.append(tuple(replaced))
        return out
    visible = [
        face
        for face, apex in _boundary_faces(cells).items()
        if orientation(*face, v) * orientation(*face, apex) < 0
    ]
    if not visible:
        raise InternalError(f"point {v} is outside the complex but sees no face")
    return cells + [face + (v,) for face in visible]


def initial_empty_triangulation(polytope: LatticePolytope) -> CellComplex:
    """Placing triangulation of all lattice points of P, inserted in lexicographic order."""
    coords = polytope.coordinates()
    points = lattice_points_in(coords)
    start = _initial_simplex(points)
    cells: List[Cell] = [tuple(points[i] for i in start)]
    for i, v in enumerate(points):
        if i not in start:
            cells = _insert(cells, v)
    vertices = sorted({v for cell in cells for v in cell})
    index = {v: i for i, v in enumerate(vertices)}
    tetrahedra = sorted(tuple(sorted(index[v] for v in cell)) for cell in cells)
    complex_ = CellComplex(vertices, tetrahedra)
    for cell in complex_.cells():
        simplex = LatticeSimplex(cell, integer_lattice())
        if not is_empty(simplex):
            raise InternalError(f"placing produced a non-empty cell {cell}")
        cls = classify(simplex)
        complex_.classes.append(cls)
    logger.info(f"Placing triangulation: {len(points)} points, {len(tetrahedra)} empty cells")
    return complex_


# ---------------------------------------------------------------------------
# Dilation
# ---------------------------------------------------------------------------


def _plan_for(p: int, q: int, k: int, style: BoundaryStyle, dissection_mode: bool) -> DilationPlan:
    if dissection_mode:
        if k < 2:
            raise DomainError(f"dissections need k >= 2, got {k}")
        return DilationPlan(Method.DISSECTION, p, q, k, BoundaryStyle.UNCONSTRAINED)
    try:
        return dispatch(p, q, k, style)
    except DomainError as e:
        raise DomainError(f"cell of class ({p},{q}): {e}") from e


def _model(plan: DilationPlan) -> Tuple[Tuple[Point, ...], Tuple[Tuple[int, ...], ...]]:
    tri = run_plan(plan)
    return tuple(tri.vertices), tuple(tri.tetrahedra)


def triangulate_dilation(
    polytope: LatticePolytope,
    k: int,
    style: "str | BoundaryStyle" = BoundaryStyle.STANDARD,
    dissection_mode: bool = False,
    jobs: int = 1,
) -> Triangulation:
    """Unimodular triangulation (or dissection) of kP over the polytope's lattice."""
    style = BoundaryStyle.parse(style)
    if style == BoundaryStyle.UNCONSTRAINED and not dissection_mode:
        raise DomainError("gluing needs a standard or quasi-standard boundary style")
    if k < 1:
        raise DomainError(f"dilation factor must be positive, got {k}")
    complex_ = initial_empty_triangulation(polytope)
    cells = complex_.cells()
    classes = complex_.classes

    keys = sorted({(c.p, c.q) for c in classes})
    plans = [_plan_for(p, q, k, style, dissection_mode) for p, q in keys]
    if jobs > 1 and len(plans) > 1:
        with Pool(min(jobs, len(plans))) as pool:
            models = pool.map(_model, plans)
    else:
        models = [_model(plan) for plan in plans]
    by_key = dict(zip(keys, models))

    to_ambient = polytope.basis_map()
    out: List[Cell] = []
    for cell, cls in zip(cells, classes):
        vertices, tetrahedra = by_key[(cls.p, cls.q)]
        back = to_ambient.compose(model_to_cell(cls, k))
        image = [back.apply(v) for v in vertices]
        out.extend(tuple(image[i] for i in t) for t in tetrahedra)
    logger.info(f"Dilated {len(cells)} cells by {k}: {len(out)} cells from {len(keys)} classes")
    return Triangulation.from_cells(
        out,
        polytope.lattice,
        BoundaryStyle.UNCONSTRAINED.value if dissection_mode else style.value,
        {
            "k": k,
            "method": "Dissection" if dissection_mode else "Pipeline",
            "cells": len(cells),
            "classes": [list(key) for key in keys],
            "polytope": [list(v) for v in polytope.vertices],
            "dissection": dissection_mode,
        },
    )


def shared_face_contract(
    cell_a: Sequence[Point], cell_b: Sequence[Point], k: int, style: "str | BoundaryStyle"
) -> FrozenSet[Tuple[Point, Point]]:
    """Edges that both cells' k-dilates must carry on their common triangle.

    Computed from the triangle alone, so both sides obtain the same set.
    """
    style = BoundaryStyle.parse(style)
    face = sorted(set(map(tuple, cell_a)) & set(map(tuple, cell_b)))
    if len(face) != 3:
        raise DomainError("cells do not share a triangle")
    quasi = style == BoundaryStyle.QUASI_STANDARD
    bary = quasi_standard_face(k) if quasi else standard_face_edges(k)

    def point(b: Tuple[int, int, int]) -> Point:
        return tuple(sum(b[i] * face[i][c] for i in range(3)) for c in range(3))  # type: ignore[return-value]

    return frozenset(tuple(sorted((point(a), point(b)))) for a, b in bary)
