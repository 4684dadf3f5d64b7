"""Lattice combinatorics of the fundamental square and triangulations of squares and strips.

A square of side q carries the q - 1 interior lattice points (i p' mod q, i). Strips are
rows of squares written in (along, across) coordinates, where the lattice condition reads
along = r * across (mod q); r is p' for rows and p'' for columns.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from .lattice_core import DomainError, InternalError, mod_inverse

logger = logging.getLogger(__name__)

SquarePoint = Tuple[int, int]
Edge = Tuple[SquarePoint, SquarePoint]
Triangle = Tuple[SquarePoint, SquarePoint, SquarePoint]

X_AXIS = "X"
Y_AXIS = "Y"

# Square triangulation kinds: maximal Y-path, maximal X-path, compatible quasi-maximal pair.
KIND_Y = "Y"
KIND_X = "X"
KIND_PAIR = "XY"
# q = 1 squares are split by one diagonal.
KIND_RISING = "/"
KIND_FALLING = "\\"


@dataclass(frozen=True)
class SquareContext:
    p: int
    q: int

    @property
    def p_prime(self) -> int:
        return (-self.p) % self.q

    @property
    def p_tprime(self) -> int:
        return mod_inverse(self.p, self.q) if self.q > 1 else 0

    @property
    def p_dprime(self) -> int:
        return (self.q - self.p_tprime) % self.q if self.q > 1 else 0


@lru_cache(maxsize=None)
def square_context(p: int, q: int) -> SquareContext:
    if q < 1:
        raise DomainError(f"q must be positive, got {q}")
    if q > 1 and gcd(p, q) != 1:
        raise DomainError(f"gcd({p}, {q}) != 1")
    return SquareContext(p % q if q > 1 else 0, q)


@dataclass(frozen=True)
class MonotonePath:
    axis: str
    points: Tuple[SquarePoint, ...]

    def edges(self) -> List[Edge]:
        return [edge_key(a, b) for a, b in zip(self.points, self.points[1:])]


@dataclass(frozen=True)
class SquareTriangulation:
    """Triangulation of a lattice point set in the plane (a square or a strip)."""

    points: Tuple[SquarePoint, ...]
    triangles: Tuple[Triangle, ...]
    forced: FrozenSet[Edge]

    def edges(self) -> Set[Edge]:
        out: Set[Edge] = set()
        for a, b, c in self.triangles:
            out.update((edge_key(a, b), edge_key(b, c), edge_key(a, c)))
        return out


def edge_key(a: SquarePoint, b: SquarePoint) -> Edge:
    return (a, b) if a <= b else (b, a)


def interior_points(ctx: SquareContext) -> List[SquarePoint]:
    """The q - 1 interior points ordered by y."""
    return [((i * ctx.p_prime) % ctx.q, i) for i in range(1, ctx.q)]


def maximal_path(ctx: SquareContext, axis: str) -> MonotonePath:
    if ctx.q < 2:
        raise DomainError("maximal paths need q >= 2")
    if axis == Y_AXIS:
        return MonotonePath(Y_AXIS, tuple(interior_points(ctx)))
    if axis == X_AXIS:
        return MonotonePath(X_AXIS, tuple((j, (j * ctx.p_dprime) % ctx.q) for j in range(1, ctx.q)))
    raise DomainError(f"unknown axis {axis!r}")


# ---------------------------------------------------------------------------
# Planar predicates
# ---------------------------------------------------------------------------


def orient2(a: SquarePoint, b: SquarePoint, c: SquarePoint) -> int:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a: SquarePoint, b: SquarePoint, c: SquarePoint) -> bool:
    """c lies on the closed segment ab (c collinear with a and b assumed)."""
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])


def improper_intersection(e: Edge, f: Edge) -> bool:
    """True if the two segments meet in anything other than a common endpoint."""
    if e == f:
        return False
    a, b = e
    c, d = f
    shared = {a, b} & {c, d}
    o1, o2 = orient2(a, b, c), orient2(a, b, d)
    o3, o4 = orient2(c, d, a), orient2(c, d, b)
    if shared:
        if o1 == 0 and o2 == 0:
            # collinear with a shared endpoint: overlap iff the other ends are on the same side
            s = shared.pop()
            u = b if a == s else a
            v = d if c == s else c
            return (u[0] - s[0]) * (v[0] - s[0]) + (u[1] - s[1]) * (v[1] - s[1]) > 0
        return False
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    if o4 == 0 and _on_segment(c, d, b):
        return True
    return False


def paths_compatible(ctx: SquareContext) -> bool:
    """Whether the maximal X-path and maximal Y-path intersect properly."""
    if ctx.q < 2:
        return True
    return crossing_obstruction(ctx) is None


def crossing_obstruction(ctx: SquareContext) -> Optional[Tuple[SquarePoint, ...]]:
    """Points a, b, c, d with ab on the maximal Y-path crossing cd on the maximal X-path."""
    if ctx.q < 2:
        return None
    y_edges = maximal_path(ctx, Y_AXIS).edges()
    x_edges = maximal_path(ctx, X_AXIS).edges()
    for e in y_edges:
        for f in x_edges:
            if improper_intersection(e, f):
                return (e[0], e[1], f[0], f[1])
    return None


# ---------------------------------------------------------------------------
# Latitudes, longitudes and quasi-maximal paths
# ---------------------------------------------------------------------------


def latitude_direction(ctx: SquareContext) -> Tuple[int, int]:
    s = ctx.p_prime
    return (s, 1) if 2 * s < ctx.q else (s - ctx.q, 1)


def longitude_direction(ctx: SquareContext) -> Tuple[int, int]:
    s = ctx.p_dprime
    return (1, s) if 2 * s < ctx.q else (1, -ctx.p_tprime)


def latitude(ctx: SquareContext, point: SquarePoint) -> int:
    """Index of the latitude line through ``point``."""
    s = latitude_direction(ctx)[0]
    return (point[0] - s * point[1]) // ctx.q


def longitude(ctx: SquareContext, point: SquarePoint) -> int:
    s = longitude_direction(ctx)[1]
    return (point[1] - s * point[0]) // ctx.q


def _axis_coord(axis: str, point: SquarePoint) -> int:
    return point[1] if axis == Y_AXIS else point[0]


def _quasi_step(ctx: SquareContext, axis: str, a: SquarePoint, b: SquarePoint) -> bool:
    gap = _axis_coord(axis, b) - _axis_coord(axis, a)
    if gap <= 0:
        return False
    if gap == 1:
        return True
    line = latitude if axis == Y_AXIS else longitude
    return abs(line(ctx, b) - line(ctx, a)) == 1


def is_quasi_maximal(ctx: SquareContext, path: MonotonePath) -> bool:
    """Quasi-maximal: runs from level 1 to level q-1 with order- or line-consecutive steps."""
    pts = path.points
    if ctx.q < 2 or not pts:
        return False
    interior = set(interior_points(ctx))
    if any(pt not in interior for pt in pts):
        return False
    if _axis_coord(path.axis, pts[0]) != 1 or _axis_coord(path.axis, pts[-1]) != ctx.q - 1:
        return False
    return all(_quasi_step(ctx, path.axis, a, b) for a, b in zip(pts, pts[1:]))


def _quasi_paths(ctx: SquareContext, axis: str) -> Iterator[Tuple[SquarePoint, ...]]:
    """Quasi-maximal paths, longest (maximal) first."""
    by_level = {_axis_coord(axis, pt): pt for pt in interior_points(ctx)}
    last = ctx.q - 1

    def extend(path: Tuple[SquarePoint, ...]) -> Iterator[Tuple[SquarePoint, ...]]:
        head = path[-1]
        level = _axis_coord(axis, head)
        if level == last:
            yield path
            return
        for nxt in range(level + 1, last + 1):
            pt = by_level[nxt]
            if _quasi_step(ctx, axis, head, pt):
                yield from extend(path + (pt,))

    yield from extend((by_level[1],))


def _x_path_avoiding(
    ctx: SquareContext, y_edges: List[Edge]
) -> Optional[Tuple[SquarePoint, ...]]:
    by_level = {pt[0]: pt for pt in interior_points(ctx)}
    last = ctx.q - 1
    dead: Set[SquarePoint] = set()

    def clean(e: Edge) -> bool:
        return not any(improper_intersection(e, f) for f in y_edges)

    def extend(path: Tuple[SquarePoint, ...]) -> Optional[Tuple[SquarePoint, ...]]:
        head = path[-1]
        if head[0] == last:
            return path
        if head in dead:
            return None
        for nxt in range(head[0] + 1, last + 1):
            pt = by_level[nxt]
            if _quasi_step(ctx, X_AXIS, head, pt) and clean(edge_key(head, pt)):
                found = extend(path + (pt,))
                if found:
                    return found
        dead.add(head)
        return None

    start = by_level[1]
    return extend((start,))


@lru_cache(maxsize=None)
def compatible_quasi_maximal_pair(ctx: SquareContext) -> Tuple[MonotonePath, MonotonePath]:
    """A quasi-maximal X-path and Y-path that intersect properly."""
    if ctx.q < 2:
        raise DomainError("quasi-maximal paths need q >= 2")
    if paths_compatible(ctx):
        return maximal_path(ctx, X_AXIS), maximal_path(ctx, Y_AXIS)
    for y_path in _quasi_paths(ctx, Y_AXIS):
        y_edges = [edge_key(a, b) for a, b in zip(y_path, y_path[1:])]
        x_path = _x_path_avoiding(ctx, y_edges)
        if x_path is not None:
            logger.debug(f"Quasi-maximal pair for ({ctx.p},{ctx.q}): Y={y_path} X={x_path}")
            return MonotonePath(X_AXIS, x_path), MonotonePath(Y_AXIS, y_path)
    raise InternalError(f"no compatible quasi-maximal paths for ({ctx.p},{ctx.q})")


# ---------------------------------------------------------------------------
# Constrained triangulations by greedy edge insertion
# ---------------------------------------------------------------------------


def _primitive_in(q: int, r: int, du: int, dv: int) -> bool:
    """No lattice point strictly inside the segment with difference (du, dv)."""
    g = gcd(du, dv)
    for m in range(2, g + 1):
        if g % m == 0 and (du // m - r * (dv // m)) % q == 0:
            return False
    return True


class _EdgeIndex:
    """Bucket grid over edge bounding boxes for crossing queries."""

    def __init__(self, cell: int):
        self.cell = max(cell, 1)
        self.buckets: Dict[Tuple[int, int], List[Edge]] = defaultdict(list)

    def _cells(self, e: Edge):
        (x0, y0), (x1, y1) = e
        c = self.cell
        for i in range(min(x0, x1) // c, max(x0, x1) // c + 1):
            for j in range(min(y0, y1) // c, max(y0, y1) // c + 1):
                yield (i, j)

    def add(self, e: Edge):
        for key in self._cells(e):
            self.buckets[key].append(e)

    def crosses(self, e: Edge) -> bool:
        seen: Set[Edge] = set()
        for key in self._cells(e):
            for f in self.buckets.get(key, ()):
                if f not in seen:
                    seen.add(f)
                    if improper_intersection(e, f):
                        return True
        return False


def triangulate_point_set(
    points: Sequence[SquarePoint],
    forced_edges: Sequence[Edge],
    q: int,
    r: int,
    hull_count: int,
) -> SquareTriangulation:
    """Greedy completion of ``forced_edges`` to a full triangulation of ``points``.

    ``points`` are all lattice points (u = r v mod q) of a convex region whose boundary
    carries ``hull_count`` of them; every resulting triangle has area q / 2.
    """
    pts = sorted(set(points))
    forced = [edge_key(*e) for e in forced_edges]
    for i, e in enumerate(forced):
        for f in forced[i + 1 :]:
            if improper_intersection(e, f):
                raise DomainError(f"forced edges {e} and {f} intersect improperly")

    index = _EdgeIndex(q)
    chosen: Set[Edge] = set()
    for e in forced:
        if e not in chosen:
            chosen.add(e)
            index.add(e)

    candidates = []
    for i, a in enumerate(pts):
        for b in pts[i + 1 :]:
            if _primitive_in(q, r, b[0] - a[0], b[1] - a[1]):
                length = (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2
                candidates.append((length, a, b))
    candidates.sort()
    for _, a, b in candidates:
        e = (a, b)
        if e in chosen or index.crosses(e):
            continue
        chosen.add(e)
        index.add(e)

    neighbours: Dict[SquarePoint, Set[SquarePoint]] = defaultdict(set)
    for a, b in chosen:
        neighbours[a].add(b)
        neighbours[b].add(a)
    triangles = []
    for a, b in sorted(chosen):
        for c in neighbours[a] & neighbours[b]:
            if c > b and abs(orient2(a, b, c)) == q:
                triangles.append((a, b, c))
    expected = 2 * len(pts) - hull_count - 2
    if len(triangles) != expected:
        raise InternalError(
            f"greedy completion produced {len(triangles)} triangles, expected {expected}"
        )
    return SquareTriangulation(tuple(pts), tuple(sorted(triangles)), frozenset(forced))


def strip_points(q: int, r: int, squares: int) -> List[SquarePoint]:
    """Lattice points of [0, squares*q] x [0, q] with u = r v (mod q)."""
    pts = [(i * q, v) for i in range(squares + 1) for v in (0, q)]
    for v in range(1, q):
        base = (r * v) % q
        pts.extend((s * q + base, v) for s in range(squares))
    return pts


def complete_square_triangulation(
    ctx: SquareContext, forced_edges: Sequence[Edge]
) -> SquareTriangulation:
    points = strip_points(ctx.q, ctx.p_prime, 1)
    return triangulate_point_set(points, forced_edges, ctx.q, ctx.p_prime, 4)


@lru_cache(maxsize=None)
def square_triangulation(ctx: SquareContext, kind: str) -> SquareTriangulation:
    """Triangulation of the square carrying the paths named by ``kind``."""
    q = ctx.q
    if q == 1:
        diagonal = ((1, 0), (0, 1)) if kind == KIND_FALLING else ((0, 0), (1, 1))
        return complete_square_triangulation(ctx, [diagonal])
    if kind in (KIND_RISING, KIND_FALLING):
        raise DomainError("diagonal squares only exist for q = 1")
    if kind == KIND_Y:
        forced = maximal_path(ctx, Y_AXIS).edges()
    elif kind == KIND_X:
        forced = maximal_path(ctx, X_AXIS).edges()
    elif kind == KIND_PAIR:
        x_path, y_path = compatible_quasi_maximal_pair(ctx)
        forced = sorted(set(x_path.edges()) | set(y_path.edges()))
    else:
        raise DomainError(f"unknown square kind {kind!r}")
    return complete_square_triangulation(ctx, forced)


def square_path(ctx: SquareContext, kind: str, axis: str) -> Optional[Tuple[SquarePoint, ...]]:
    """Interior path of a square of ``kind`` usable for ``axis``, if any."""
    if ctx.q == 1:
        return ()
    if paths_compatible(ctx) and kind != KIND_PAIR:
        return maximal_path(ctx, axis).points
    if kind == KIND_PAIR:
        x_path, y_path = compatible_quasi_maximal_pair(ctx)
        return (x_path if axis == X_AXIS else y_path).points
    if kind == axis:
        return maximal_path(ctx, axis).points
    return None


@lru_cache(maxsize=None)
def strip_fan_triangulation(q: int, r: int, squares: int, hub: int) -> SquareTriangulation:
    """Strip triangulation where every side corner is joined to one shared maximal path.

    The path runs through square ``hub``; near corners meet its first point, far corners
    its last point. Any pair of side corners is then linked by a monotone path.
    """
    if q < 2:
        raise DomainError("shared-path strips need q >= 2")
    path = hub_path(q, r, hub)
    forced = [edge_key(a, b) for a, b in zip(path, path[1:])]
    forced += [edge_key((i * q, 0), path[0]) for i in range(squares + 1)]
    forced += [edge_key((i * q, q), path[-1]) for i in range(squares + 1)]
    points = strip_points(q, r, squares)
    return triangulate_point_set(points, forced, q, r, 2 * (squares + 1))


def hub_path(q: int, r: int, square: int) -> Tuple[SquarePoint, ...]:
    return tuple((square * q + (r * v) % q, v) for v in range(1, q))
