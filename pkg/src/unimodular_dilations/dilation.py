"""Unimodular triangulations of dilated right-angled empty tetrahedra.

All constructions work in the right-angled frame: k times conv{(0,0,0), (q,0,0), (0,0,1),
(0,q,1)} with the lattice x = p'y (mod q). The layered constructions split the polytope
into horizontal layers, each layer into wedges (see ``prism_builder``), and choose per
plane how the fundamental squares are triangulated.
"""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .empty_simplex import EmptyClass, classify, right_angled_map, tetragonal
from .fundamental_square import (
    KIND_PAIR,
    KIND_RISING,
    KIND_X,
    KIND_Y,
    X_AXIS,
    Y_AXIS,
    SquareContext,
    square_context,
)
from .lattice_core import (
    AffineLatticeMap,
    Cell,
    DomainError,
    InternalError,
    LatticeSimplex,
    Point,
    Triangulation,
    integer_lattice,
    line_direction,
    normalized_volume,
    right_angled_lattice,
    right_angled_vertices,
    sub,
)
from .prism_builder import (
    FanStrip,
    Layer,
    SideStrip,
    SquareStrip,
    StripLayout,
    Toblerone,
    assign_paths,
    decompose_layer,
    fan_residue,
    free_boundary_paths,
    standard_boundary_paths,
    transpose_staircase,
    triangulate_prism,
)

logger = logging.getLogger(__name__)

OBSTRUCTED_STANDARD = (1, 2, 3, 5, 7, 11)
OBSTRUCTED_ANY = (1, 2, 3, 5)


class BoundaryStyle(str, Enum):
    UNCONSTRAINED = "unconstrained"
    STANDARD = "standard"
    QUASI_STANDARD = "quasi-standard"

    @classmethod
    def parse(cls, value: "str | BoundaryStyle") -> "BoundaryStyle":
        if isinstance(value, BoundaryStyle):
            return value
        aliases = {"free": cls.UNCONSTRAINED, "quasi": cls.QUASI_STANDARD}
        key = str(value).strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown boundary style {value!r}") from None


class Method(str, Enum):
    TETRAGONAL_2 = "Tetragonal2"
    TETRAGONAL_K = "TetragonalK"
    NON_STANDARD_K = "NonStandardK"
    TETRAGONAL_CELLS = "TetragonalCells"
    COMPOSITE = "Composite"
    SUM = "Sum"
    QUASI_STANDARD_K = "QuasiStandardK"
    DISSECTION = "Dissection"


@dataclass(frozen=True)
class DilationPlan:
    method: Method
    p: int
    q: int
    k: int
    style: BoundaryStyle
    k1: int = 0
    k2: int = 0
    height: int = 0

    def describe(self) -> str:
        if self.method in (Method.COMPOSITE, Method.SUM):
            return f"{self.method.value}({self.k1},{self.k2})"
        return self.method.value


STANDARD_DIRECTIONS_CACHE: Dict[int, Set[Point]] = {}


def standard_directions(q: int) -> Set[Point]:
    """Line directions of the six edges of the right-angled tetrahedron."""
    if q not in STANDARD_DIRECTIONS_CACHE:
        verts = [(0, 0, 0), (q, 0, 0), (0, 0, 1), (0, q, 1)]
        STANDARD_DIRECTIONS_CACHE[q] = {
            line_direction(sub(b, a)) for i, a in enumerate(verts) for b in verts[i + 1 :]
        }
    return STANDARD_DIRECTIONS_CACHE[q]


# ---------------------------------------------------------------------------
# Layered construction engine
# ---------------------------------------------------------------------------


@dataclass
class PlanePlan:
    """How the fundamental squares of one horizontal plane are triangulated."""

    z: int
    default: str = KIND_Y
    kinds: Dict[Tuple[int, int], str] = field(default_factory=dict)
    fan: bool = False

    def kind(self, a: int, b: int) -> str:
        return self.kinds.get((a, b), self.default)


SideKey = Tuple[int, int, str]


@dataclass
class Deviation:
    """Side corners of a wedge that differ from the standard staircase."""

    h: int
    wedge: int
    side: str
    segments: List[int]


class _UnitStrip(StripLayout):
    """Planning stand-in for q = 1 strips whose diagonals are chosen afterwards."""

    def path(self, near: int, far: int, start: int):
        if abs(near - far) > 1 or not (0 <= near <= self.squares and 0 <= far <= self.squares):
            raise DomainError(f"unit strip cannot join corner {near} to corner {far}")
        return ((near, 0), (far, 1)), max(start, min(near, far))


class LayeredBuilder:
    """Builds a triangulation layer by layer from plane plans and side requests."""

    def __init__(
        self,
        ctx: SquareContext,
        k: int,
        directions: Sequence[str],
        planes: Dict[int, PlanePlan],
        requests: Optional[Dict[SideKey, List[int]]] = None,
        layers: Optional[Iterable[int]] = None,
        wedge_filter=None,
        checked: bool = True,
    ):
        self.ctx = ctx
        self.q = ctx.q
        self.k = k
        self.directions = list(directions)
        self.planes = planes
        self.requests = dict(requests or {})
        self.layer_ids = list(layers) if layers is not None else list(range(k))
        self.wedge_filter = wedge_filter
        self.checked = checked
        self.deviations: List[Deviation] = []

    def plane(self, z: int) -> PlanePlan:
        return self.planes.setdefault(z, PlanePlan(z))

    def wedges(self, h: int) -> List[Toblerone]:
        layer = Layer(self.k, h)
        wedges = decompose_layer(layer, self.directions[h], self.q, self.checked)
        if self.wedge_filter is not None:
            wedges = [w for w in wedges if self.wedge_filter(w)]
        return wedges

    def _square_kinds(self, w: Toblerone) -> List[str]:
        plane = self.plane(w.strip_plane)
        if w.direction == X_AXIS:
            return [plane.kind(a, w.index) for a in range(w.squares)]
        return [plane.kind(w.index, b) for b in range(w.squares)]

    def strip(self, w: Toblerone, planning: bool = False) -> StripLayout:
        if w.squares == 0:
            return SideStrip(self.q)
        plane = self.plane(w.strip_plane)
        if self.q == 1:
            if planning:
                return _UnitStrip(1, w.squares)
            return SquareStrip(self.ctx, self._square_kinds(w), w.direction == Y_AXIS)
        if plane.fan:
            return FanStrip(self.q, fan_residue(self.ctx, w.direction), w.squares)
        return SquareStrip(self.ctx, self._square_kinds(w), w.direction == Y_AXIS)

    # -- side resolution -------------------------------------------------

    def _anchor_sides(
        self,
        w: Toblerone,
        strip: StripLayout,
        req_near: Optional[List[int]],
        req_far: Optional[List[int]],
    ) -> Tuple[List[int], List[int]]:
        if req_near is None and req_far is None:
            try:
                paths, _ = standard_boundary_paths(w, strip)
                near = [round(path[0][0] / self.q) for path in paths]
                far = [round(path[-1][0] / self.q) for path in paths]
                return near, far
            except DomainError:
                pass
        std_near, std_far = w.standard_sides()
        want_near = req_near if req_near is not None else std_near
        want_far = req_far if req_far is not None else std_far
        near: List[int] = []
        far: List[int] = []
        start = prev_n = prev_f = 0
        values = range(w.squares + 1)
        for i in range(w.segments):
            best = None
            for tn in [want_near[i]] if req_near is not None else values:
                if tn < prev_n:
                    continue
                for tf in [want_far[i]] if req_far is not None else values:
                    if tf < prev_f:
                        continue
                    try:
                        _, square = strip.path(tn, tf, start)
                    except DomainError:
                        continue
                    score = (
                        abs(tn - want_near[i]) + abs(tf - want_far[i]),
                        abs(tn - tf),
                        tn,
                        tf,
                    )
                    if best is None or score < best[0]:
                        best = (score, tn, tf, square)
            if best is None:
                raise InternalError(f"no admissible corners for segment {i} of {w}")
            _, prev_n, prev_f, start = best
            near.append(prev_n)
            far.append(prev_f)
        return near, far

    def resolve_layer(self, h: int) -> Tuple[List[Toblerone], List[List[int]], List[List[int]]]:
        wedges = self.wedges(h)
        strips = [self.strip(w, planning=True) for w in wedges]
        count = len(wedges)
        near: List[Optional[List[int]]] = [None] * count
        far: List[Optional[List[int]]] = [None] * count
        anchors = set()
        for i, (w, strip) in enumerate(zip(wedges, strips)):
            req_near = self.requests.get((h, i, "near"))
            req_far = self.requests.get((h, i, "far"))
            std_near, std_far = w.standard_sides()
            if req_near is None and req_far is None:
                try:
                    assign_paths(strip, std_near, std_far)
                    continue
                except DomainError:
                    pass
            near[i], far[i] = self._anchor_sides(w, strip, req_near, req_far)
            anchors.add(i)

        for i, w in enumerate(wedges):
            if i in anchors:
                continue
            std_near, std_far = w.standard_sides()
            near[i] = (
                transpose_staircase(far[i - 1], w.segments) if i - 1 in anchors else std_near
            )
            far[i] = (
                transpose_staircase(near[i + 1], w.segments) if i + 1 in anchors else std_far
            )
        for i in range(count - 1):
            if i in anchors and i + 1 in anchors:
                if transpose_staircase(far[i], wedges[i + 1].segments) != near[i + 1]:
                    raise InternalError(
                        f"adjacent constrained wedges {i}, {i + 1} disagree in layer {h}"
                    )

        for i, w in enumerate(wedges):
            std_near, std_far = w.standard_sides()
            for side, seq, std in (("near", near[i], std_near), ("far", far[i], std_far)):
                bad = [s for s, (a, b) in enumerate(zip(seq, std)) if a != b]
                if bad:
                    self.deviations.append(Deviation(h, i, side, bad))
        return wedges, near, far  # type: ignore[return-value]

    # -- assembly ----------------------------------------------------------

    def _request_diagonals(self, resolved) -> None:
        """For q = 1, pick the diagonal of every unit square a path needs."""
        for plane in self.planes.values():
            plane.kinds.clear()
        for wedges, near, far in resolved:
            for w, ns, fs in zip(wedges, near, far):
                if w.squares == 0:
                    continue
                plane = self.plane(w.strip_plane)
                for a, b in zip(ns, fs):
                    request = SquareStrip.diagonal_request(a, b)
                    if request is None:
                        continue
                    s, kind = request
                    key = (s, w.index) if w.direction == X_AXIS else (w.index, s)
                    current = plane.kinds.get(key)
                    if current is not None and current != kind:
                        raise InternalError(
                            f"conflicting diagonals for unit square {key} on plane {plane.z}"
                        )
                    plane.kinds[key] = kind
        for plane in self.planes.values():
            plane.default = KIND_RISING

    def build(self) -> List[Cell]:
        resolved = [self.resolve_layer(h) for h in self.layer_ids]
        if self.q == 1:
            self._request_diagonals(resolved)
        cells: List[Cell] = []
        for wedges, near, far in resolved:
            for w, ns, fs in zip(wedges, near, far):
                strip = self.strip(w)
                try:
                    paths = free_boundary_paths(w, strip, ns, fs)
                except DomainError as e:
                    raise InternalError(f"layer {w.h}: {e}") from e
                cells.extend(triangulate_prism(w, strip.triangulation(), paths))
        return cells


def _uniform_planes(k: int, kind: str) -> Dict[int, PlanePlan]:
    return {z: PlanePlan(z, kind) for z in range(1, k)}


def _split_directions(k: int, c: int) -> List[str]:
    return [X_AXIS if h < c else Y_AXIS for h in range(k)]


# ---------------------------------------------------------------------------
# Flips
# ---------------------------------------------------------------------------


def flip_square_pyramid(
    cells: List[Cell], old: Tuple[Point, Point], new: Tuple[Point, Point]
) -> List[Cell]:
    """Swap the diagonal ``old`` of a planar quadrilateral for ``new``.

    The two cells containing ``old`` and one endpoint of ``new`` must share their fourth
    vertex (the pyramid apex); they are replaced by the two cells on the other diagonal.
    """
    found = []
    for corner in new:
        wanted = {old[0], old[1], corner}
        matches = [i for i, cell in enumerate(cells) if wanted <= set(cell)]
        if len(matches) != 1:
            raise InternalError(
                f"expected one cell containing {sorted(wanted)}, found {len(matches)}"
            )
        found.append(matches[0])
    apexes = [set(cells[i]) - {old[0], old[1], corner} for i, corner in zip(found, new)]
    if apexes[0] != apexes[1] or len(apexes[0]) != 1:
        raise InternalError(f"edge {old} is not the diagonal of a square pyramid")
    apex = apexes[0].pop()
    keep = [cell for i, cell in enumerate(cells) if i not in found]
    keep.append((apex, new[0], new[1], old[0]))
    keep.append((apex, new[0], new[1], old[1]))
    return keep


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def _finish(
    cells: List[Cell], p: int, q: int, k: int, method: str, style: BoundaryStyle, **meta
) -> Triangulation:
    return Triangulation.from_cells(
        cells,
        right_angled_lattice(p, q),
        style.value,
        {"p": p, "q": q, "k": k, "method": method, **meta},
    )


def triangulate_tetragonal_2(q: int) -> Triangulation:
    """Eight cones over the diagonal of the fundamental square, then four boundary flips."""
    if q < 1:
        raise DomainError(f"q must be positive, got {q}")
    a = [(q - i, i, 1) for i in range(q + 1)]
    b = [
        None,
        (2 * q, 0, 0),
        (q, q, 1),
        (0, 2 * q, 2),
        (0, q, 2),
        (0, 0, 2),
        (0, 0, 1),
        (0, 0, 0),
        (q, 0, 0),
    ]
    cells: List[Cell] = []
    for i in range(q):
        for j in range(1, 9):
            cells.append((a[i], a[i + 1], b[j], b[j % 8 + 1]))
    cells = flip_square_pyramid(cells, (a[0], b[3]), (b[2], b[4]))
    cells = flip_square_pyramid(cells, (a[q], b[5]), (b[4], b[6]))
    cells = flip_square_pyramid(cells, (a[0], b[7]), (b[6], b[8]))
    cells = flip_square_pyramid(cells, (a[q], b[1]), (b[8], b[2]))
    p = 1 if q > 1 else 0
    return _finish(cells, p, q, 2, Method.TETRAGONAL_2.value, BoundaryStyle.STANDARD)


def triangulate_tetragonal_k(q: int, k: int, p: int = 1) -> Triangulation:
    """Layered triangulation of a tetragonal class: every square carries both maximal paths."""
    ctx = square_context(p, q)
    if not tetragonal(ctx.p, q):
        raise DomainError(f"({p},{q}) is not tetragonal")
    if k < 1:
        raise DomainError(f"dilation factor must be positive, got {k}")
    if k == 1:
        if q != 1:
            raise DomainError(f"the undilated tetrahedron of ({p},{q}) is not unimodular")
        cell = tuple(right_angled_vertices(1))
        return _finish([cell], 0, 1, 1, Method.TETRAGONAL_K.value, BoundaryStyle.STANDARD)
    builder = LayeredBuilder(ctx, k, _split_directions(k, (k + 1) // 2), _uniform_planes(k, KIND_Y))
    return _finish(builder.build(), ctx.p, q, k, Method.TETRAGONAL_K.value, BoundaryStyle.STANDARD)


def interface_checkerboard(k: int, c: int) -> Dict[Tuple[int, int], str]:
    """Kinds on the interface plane: square (a, b) is Y when a + b is even."""
    return {
        (a, b): KIND_Y if (a + b) % 2 == 0 else KIND_X for a in range(k - c) for b in range(c)
    }


def triangulate_nonstandard(p: int, q: int, k: int, c: Optional[int] = None) -> Triangulation:
    """X layers below height c, Y layers above, a checkerboard on the interface plane.

    At most four boundary edges leave the standard directions.
    """
    ctx = square_context(p, q)
    if k < 4:
        raise DomainError(f"the split construction needs k >= 4, got {k}")
    c = (k + 1) // 2 if c is None else c
    if not 2 <= c <= k - 2:
        raise DomainError(f"interface height must lie in [2, {k - 2}], got {c}")
    planes = {z: PlanePlan(z, KIND_Y if z < c else KIND_X) for z in range(1, k)}
    planes[c].kinds.update(interface_checkerboard(k, c))
    builder = LayeredBuilder(ctx, k, _split_directions(k, c), planes)
    cells = builder.build()
    facet_deviations = [
        {"layer": d.h, "wedge": d.wedge, "side": d.side, "segments": d.segments}
        for d in builder.deviations
        if (d.wedge == 0 and d.side == "near")
        or (d.side == "far" and d.wedge == len(builder.wedges(d.h)) - 1)
    ]
    return _finish(
        cells,
        ctx.p,
        q,
        k,
        Method.NON_STANDARD_K.value,
        BoundaryStyle.UNCONSTRAINED,
        height=c,
        facet_deviations=facet_deviations,
    )


def triangulate_tetragonal_cells(p: int, q: int, k: int, c: Optional[int] = None) -> Triangulation:
    """Triangulation of kΔ′ into tetragonal (not necessarily unimodular) cells."""
    ctx = square_context(p, q)
    if k < 2:
        raise DomainError(f"tetragonal refinement needs k >= 2, got {k}")
    c = (k + 1) // 2 if c is None else c
    if not 1 <= c <= k - 1:
        raise DomainError(f"interface height must lie in [1, {k - 1}], got {c}")
    builder = LayeredBuilder(ctx, k, _split_directions(k, c), _uniform_planes(k, KIND_PAIR))
    tri = _finish(
        builder.build(), ctx.p, q, k, Method.TETRAGONAL_CELLS.value, BoundaryStyle.STANDARD
    )
    tri.meta["unimodular"] = False
    return tri


def model_to_cell(cls: EmptyClass, k: int) -> AffineLatticeMap:
    """Map from k times the right-angled model of ``cls`` onto k times the classified simplex."""
    to_model = right_angled_map(cls.p, cls.q).compose(cls.to_canonical)
    scaled = AffineLatticeMap(
        to_model.linear, tuple(k * t for t in to_model.translation), to_model.denominator
    )
    return scaled.inverse()


@lru_cache(maxsize=64)
def _tetragonal_refinement(q: int, k: int) -> Tuple[Tuple[Point, ...], Tuple[Tuple[int, ...], ...]]:
    tri = triangulate_tetragonal_k(q, k, 1 if q > 1 else 0)
    return tuple(tri.vertices), tuple(tri.tetrahedra)


def refine_tetragonal_cell(cell: Sequence[Point], p: int, q: int, k2: int) -> List[Cell]:
    """k2-dilate of a tetragonal cell of the k1-dilate, triangulated in its canonical frame."""
    ell = right_angled_map(p, q)
    simplex = LatticeSimplex(tuple(ell.inverse().apply(v) for v in cell), integer_lattice())
    cls = classify(simplex)
    if not tetragonal(cls.p, cls.q):
        raise InternalError(f"cell {tuple(cell)} is not tetragonal: ({cls.p},{cls.q})")
    back = ell.compose(model_to_cell(cls, k2))
    vertices, tetrahedra = _tetragonal_refinement(cls.q, k2)
    image = [back.apply(v) for v in vertices]
    return [tuple(image[i] for i in t) for t in tetrahedra]


def triangulate_composite(p: int, q: int, k1: int, k2: int) -> Triangulation:
    """Tetragonal cells of k1Δ′, each k2-dilated and refined unimodularly."""
    if k1 < 2 or k2 < 2:
        raise DomainError(f"both factors must be at least 2, got {k1} and {k2}")
    ctx = square_context(p, q)
    coarse = triangulate_tetragonal_cells(ctx.p, q, k1)
    cells: List[Cell] = []
    for cell in coarse.cells():
        cells.extend(refine_tetragonal_cell(cell, ctx.p, q, k2))
    logger.debug(f"Composite ({k1},{k2}) for ({ctx.p},{q}): {len(coarse.tetrahedra)} coarse cells")
    return _finish(
        cells, ctx.p, q, k1 * k2, Method.COMPOSITE.value, BoundaryStyle.STANDARD, k1=k1, k2=k2
    )


def boundary_triangles(cells: Iterable[Sequence[Point]]) -> List[Tuple[Point, Point, Point]]:
    counts: Dict[Tuple[Point, ...], int] = {}
    for cell in cells:
        ordered = sorted(cell)
        for drop in range(4):
            face = tuple(v for i, v in enumerate(ordered) if i != drop)
            counts[face] = counts.get(face, 0) + 1
    return [face for face, n in counts.items() if n == 1]  # type: ignore[misc]


def _require_standard_boundary(tri: Triangulation, q: int) -> None:
    allowed = standard_directions(q)
    for face in boundary_triangles(tri.cells()):
        for a, b in ((face[0], face[1]), (face[0], face[2]), (face[1], face[2])):
            if line_direction(sub(b, a)) not in allowed:
                raise InternalError(f"summand {tri.meta.get('method')} has boundary edge {a}-{b}")


def sum_split(k: int) -> Tuple[int, int]:
    """Smallest composite k1 with k - k1 composite."""
    for k1 in range(4, k - 3):
        if not _is_prime(k1) and not _is_prime(k - k1):
            return k1, k - k1
    raise DomainError(f"{k} is not a sum of two composite numbers")


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def _middle_bounds(k: int, k1: int, z: int) -> Tuple[int, int]:
    return max(0, k1 - z), min(k1, k - z)


def _validate_summand(tri: Triangulation, p: int, q: int, k: int) -> None:
    """Rejects a given summand unless it is a standard unimodular triangulation of kΔ′(p, q)."""
    outside = [
        v
        for v in tri.vertices
        if not (v[0] >= 0 and 0 <= v[1] <= q * v[2] and v[0] + q * v[2] <= k * q)
    ]
    if outside:
        raise DomainError(f"summand for k={k} has vertices outside {k}Δ′: {outside[:3]}")
    lattice = right_angled_lattice(p, q)
    volumes = [normalized_volume(LatticeSimplex(cell, lattice)) for cell in tri.cells()]
    if any(v != 1 for v in volumes):
        raise DomainError(f"summand for k={k} is not unimodular")
    if sum(volumes) != k**3 * q:
        raise DomainError(f"summand for k={k} covers volume {sum(volumes)}, expected {k**3 * q}")
    try:
        _require_standard_boundary(tri, q)
    except InternalError as e:
        raise DomainError(f"summand for k={k} is not standard: {e}") from e


def triangulate_sum(
    p: int,
    q: int,
    k1: int,
    k2: int,
    sub1: Optional[Triangulation] = None,
    sub2: Optional[Triangulation] = None,
) -> Triangulation:
    """k1Δ′ at the origin, k2Δ′ shifted along x, and the gap between them filled by Y wedges.

    Summands that are not given are built by :func:`dispatch` with standard boundary.
    """
    ctx = square_context(p, q)
    k = k1 + k2
    if sub1 is None:
        sub1 = run_plan(dispatch(ctx.p, q, k1, BoundaryStyle.STANDARD))
        _require_standard_boundary(sub1, q)
    else:
        _validate_summand(sub1, ctx.p, q, k1)
    if sub2 is None:
        sub2 = run_plan(dispatch(ctx.p, q, k2, BoundaryStyle.STANDARD))
        _require_standard_boundary(sub2, q)
    else:
        _validate_summand(sub2, ctx.p, q, k2)

    def in_middle(w: Toblerone) -> bool:
        lo, hi = _middle_bounds(k, k1, w.strip_plane)
        return lo <= w.index < hi

    builder = LayeredBuilder(
        ctx, k, [Y_AXIS] * k, _uniform_planes(k, KIND_X), wedge_filter=in_middle, checked=False
    )
    cells = list(sub1.cells())
    shift = (k1 * q, 0, 0)
    cells.extend(tuple((v[0] + shift[0], v[1], v[2]) for v in cell) for cell in sub2.cells())
    cells.extend(builder.build())
    return _finish(cells, ctx.p, q, k, Method.SUM.value, BoundaryStyle.STANDARD, k1=k1, k2=k2)


QUASI_HEIGHT = 3


def quasi_interface_kinds(k: int) -> Dict[Tuple[int, int], str]:
    """Rows 0 and 2 read X Y..Y X, row 1 reads Y X..X Y, over k - 3 columns."""
    last = k - 4
    kinds = {}
    for a in range(k - 3):
        edge = a in (0, last)
        for b in range(3):
            x_kind = edge if b != 1 else not edge
            kinds[(a, b)] = KIND_X if x_kind else KIND_Y
    return kinds


def _with_detours(length: int, changes: Dict[int, int]) -> List[int]:
    seq = list(range(length))
    for i, v in changes.items():
        seq[i] = v
    return seq


def quasi_standard_requests(k: int) -> Dict[SideKey, List[int]]:
    """Facet side corners that make every facet quasi-standard once the final flips are done."""
    outer = _with_detours(k, {2: 3, k - 3: k - 4})
    m = k - 3
    inner = _with_detours(m + 1, {0: 1, m: m - 1})
    return {
        (0, 0, "near"): outer,
        (0, 0, "far"): outer,
        (2, 0, "near"): inner,
        (2, 4, "far"): inner,
        (k - 3, 0, "near"): inner,
        (k - 3, 4, "far"): inner,
        (k - 1, 0, "near"): outer,
        (k - 1, 0, "far"): outer,
    }


def quasi_standard_final_flips(
    k: int, q: int
) -> List[Tuple[Tuple[Point, Point], Tuple[Point, Point]]]:
    """(old, new) diagonals of the eight horizontal boundary edges flipped last."""
    flips = []
    for y in (0, (k - 3) * q):
        dy_low = 0 if y == 0 else -q
        dy_high = 0 if y == 0 else q
        for x in (0, 2 * q):
            old = ((x, y, k - 3), (x + q, y, k - 3))
            new = ((x, y + dy_high, k - 2), (x + q, y + dy_low, k - 4))
            flips.append((old, new))
    for x_old, x_low, x_high in ((0, 0, 0), ((k - 3) * q, (k - 2) * q, (k - 4) * q)):
        for y in (0, 2 * q):
            old = ((x_old, y, 3), (x_old, y + q, 3))
            new = ((x_low, y, 2), (x_high, y + q, 4))
            flips.append((old, new))
    return flips


def triangulate_quasi_standard(p: int, q: int, k: int) -> Triangulation:
    """Unimodular triangulation whose four facets carry the quasi-standard face triangulation."""
    ctx = square_context(p, q)
    if k < 7:
        raise DomainError(f"quasi-standard boundary needs k >= 7, got {k}")
    c = QUASI_HEIGHT
    planes: Dict[int, PlanePlan] = {}
    for z in range(1, k):
        planes[z] = PlanePlan(z, KIND_Y if z < c else KIND_X, fan=z in (c - 1, c + 1) and q > 1)
    planes[c].kinds.update(quasi_interface_kinds(k))
    builder = LayeredBuilder(ctx, k, _split_directions(k, c), planes, quasi_standard_requests(k))
    cells = builder.build()
    for old, new in quasi_standard_final_flips(k, q):
        cells = flip_square_pyramid(cells, old, new)
    return _finish(cells, ctx.p, q, k, Method.QUASI_STANDARD_K.value, BoundaryStyle.QUASI_STANDARD)


def triangulate_dissection(p: int, q: int, k: int) -> Triangulation:
    """Unimodular dissection: one X layer at the bottom, Y layers above, every strip a fan.

    Rows and columns meet on plane 1 with different strip triangulations, so faces there may
    overlap improperly; every other face matches.
    """
    ctx = square_context(p, q)
    if k < 2:
        raise DomainError(f"dissections need k >= 2, got {k}")
    planes = {z: PlanePlan(z, KIND_X, fan=q > 1) for z in range(1, k)}
    builder = LayeredBuilder(ctx, k, _split_directions(k, 1), planes)
    tri = _finish(
        builder.build(), ctx.p, q, k, Method.DISSECTION.value, BoundaryStyle.UNCONSTRAINED
    )
    tri.meta["dissection"] = True
    return tri


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


IMPOSSIBLE_K2 = (
    "k=2 is impossible for a non-tetragonal class: "
    "the maximal paths of the fundamental square cross (p != +-1 mod q)"
)


def _not_constructed(k: int, boundary: str) -> str:
    return f"k={k} with {boundary} boundary is not provided by the known constructions"


def _standard_obstruction(k: int) -> str:
    if k == 2:
        return IMPOSSIBLE_K2
    if k in (7, 11):
        return f"{_not_constructed(k, 'standard')}; k={k} requires quasi-standard boundary"
    return _not_constructed(k, "standard")


def dispatch(
    p: int,
    q: int,
    k: int,
    style: "str | BoundaryStyle" = BoundaryStyle.STANDARD,
    height: Optional[int] = None,
) -> DilationPlan:
    """Pick the construction for (p, q, k) under the requested boundary style."""
    style = BoundaryStyle.parse(style)
    ctx = square_context(p, q)
    p = ctx.p
    if k < 1:
        raise DomainError(f"dilation factor must be positive, got {k}")

    def plan(method: Method, k1: int = 0, k2: int = 0) -> DilationPlan:
        return DilationPlan(method, p, q, k, style, k1, k2, height or 0)

    if style == BoundaryStyle.QUASI_STANDARD:
        if k < 7:
            raise DomainError(f"quasi-standard boundary needs k >= 7, got {k}")
        return plan(Method.QUASI_STANDARD_K)

    if k == 1 and q > 1:
        raise DomainError(f"k=1 is impossible: the tetrahedron of ({p},{q}) is not unimodular")

    if tetragonal(p, q):
        if k == 2 and (p == 1 or q == 1):
            return plan(Method.TETRAGONAL_2)
        return plan(Method.TETRAGONAL_K)

    if style == BoundaryStyle.UNCONSTRAINED:
        if k < 4:
            if k == 2:
                raise DomainError(IMPOSSIBLE_K2)
            raise DomainError(f"{_not_constructed(k, 'unconstrained')} for a non-tetragonal class")
        return plan(Method.NON_STANDARD_K)

    if k in OBSTRUCTED_STANDARD:
        raise DomainError(_standard_obstruction(k))
    if not _is_prime(k):
        k1 = next(d for d in range(2, k) if k % d == 0)
        return plan(Method.COMPOSITE, k1, k // k1)
    k1, k2 = sum_split(k)
    return plan(Method.SUM, k1, k2)


def run_plan(plan: DilationPlan) -> Triangulation:
    start = time.perf_counter()
    p, q, k = plan.p, plan.q, plan.k
    if plan.method == Method.TETRAGONAL_2:
        tri = triangulate_tetragonal_2(q)
    elif plan.method == Method.TETRAGONAL_K:
        tri = triangulate_tetragonal_k(q, k, p)
    elif plan.method == Method.NON_STANDARD_K:
        tri = triangulate_nonstandard(p, q, k, plan.height or None)
    elif plan.method == Method.TETRAGONAL_CELLS:
        tri = triangulate_tetragonal_cells(p, q, k, plan.height or None)
    elif plan.method == Method.COMPOSITE:
        tri = triangulate_composite(p, q, plan.k1, plan.k2)
    elif plan.method == Method.SUM:
        tri = triangulate_sum(p, q, plan.k1, plan.k2)
    elif plan.method == Method.QUASI_STANDARD_K:
        tri = triangulate_quasi_standard(p, q, k)
    elif plan.method == Method.DISSECTION:
        tri = triangulate_dissection(p, q, k)
    else:
        raise InternalError(f"unknown method {plan.method}")
    tri.meta["plan"] = plan.describe()
    seconds = time.perf_counter() - start
    logger.info(
        f"Built {plan.describe()} for (p,q,k)=({p},{q},{k}): "
        f"{len(tri.tetrahedra)} cells in {seconds:.3f}s"
    )
    return tri


def triangulate(
    p: int, q: int, k: int, style: "str | BoundaryStyle" = BoundaryStyle.STANDARD
) -> Triangulation:
    return run_plan(dispatch(p, q, k, style))
