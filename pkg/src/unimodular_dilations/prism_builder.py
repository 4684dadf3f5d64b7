"""Layers and toblerone prisms of a dilated right-angled tetrahedron, and the prism engine.

Every prism ("wedge") has a strip of fundamental squares on one horizontal plane and a
lattice edge on the neighbouring plane. Inside a wedge we work in (along, across)
coordinates of the strip: along runs parallel to the edge, across runs from the near side
(across = 0) to the far side (across = q). Long wedges carry an edge one segment longer
than the strip, placed above or below the near side; short wedges carry an edge one
segment shorter, placed above or below the far side.
"""

import logging
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Set, Tuple

from .fundamental_square import (
    KIND_FALLING,
    KIND_RISING,
    X_AXIS,
    Y_AXIS,
    SquareContext,
    SquarePoint,
    SquareTriangulation,
    edge_key,
    hub_path,
    square_path,
    square_triangulation,
    strip_fan_triangulation,
)
from .lattice_core import Cell, DomainError, InternalError, Point

logger = logging.getLogger(__name__)

LONG = "long"
SHORT = "short"


@dataclass(frozen=True)
class Layer:
    """Slab between the planes z = h and z = h + 1 of k times the tetrahedron."""

    k: int
    h: int

    @property
    def n(self) -> int:
        return self.h

    @property
    def m(self) -> int:
        return self.k - self.h - 1


@dataclass(frozen=True)
class Toblerone:
    """A wedge of a layer.

    ``direction`` X means the strip is a row of squares (paths are Y-monotone); Y means a
    column (paths are X-monotone). ``squares`` is the strip length and ``segments`` the
    edge length; ``index`` is the row or column of the strip.
    """

    direction: str
    shape: str
    h: int
    index: int
    squares: int
    segments: int
    strip_plane: int
    edge_plane: int
    q: int

    @property
    def offset(self) -> int:
        """Near-side corner joined to edge segment 0 in the standard triangulation."""
        return 0 if self.shape == LONG else 1

    @property
    def edge_across(self) -> int:
        return 0 if self.shape == LONG else self.q

    def to_space(self, u: int, w: int, plane: int) -> Point:
        if self.direction == X_AXIS:
            return (u, self.index * self.q + w, plane)
        return (self.index * self.q + w, u, plane)

    def strip_point(self, pt: SquarePoint) -> Point:
        return self.to_space(pt[0], pt[1], self.strip_plane)

    def edge_point(self, i: int) -> Point:
        return self.to_space(i * self.q, self.edge_across, self.edge_plane)

    def standard_sides(self) -> Tuple[List[int], List[int]]:
        seq = [i + self.offset for i in range(self.segments)]
        return seq, list(seq)


def decompose_layers(k: int) -> List[Layer]:
    if k < 1:
        raise DomainError(f"dilation factor must be positive, got {k}")
    return [Layer(k, h) for h in range(k)]


def layer_direction_feasible(layer: Layer, direction: str, q: int) -> bool:
    """Whether every wedge of the layer in ``direction`` can be split unimodularly."""
    if q == 1:
        return True
    return layer.m > 0 if direction == X_AXIS else layer.n > 0


def decompose_layer(
    layer: Layer, direction: str, q: int, check: bool = True
) -> List[Toblerone]:
    """Wedges of the layer in order across the strips, alternating long and short.

    With ``check`` off, wedges that cannot be split are returned too; callers that keep
    only part of a layer filter them out.
    """
    if check and not layer_direction_feasible(layer, direction, q):
        raise DomainError(
            f"layer {layer.h} of {layer.k} cannot be split in direction {direction} for q={q}"
        )
    h, n, m = layer.h, layer.n, layer.m
    wedges: List[Toblerone] = []
    if direction == X_AXIS:
        for j in range(n + 1):
            wedges.append(Toblerone(X_AXIS, LONG, h, j, m, m + 1, h + 1, h, q))
            if j < n:
                wedges.append(Toblerone(X_AXIS, SHORT, h, j, m + 1, m, h, h + 1, q))
    elif direction == Y_AXIS:
        for b in range(m + 1):
            wedges.append(Toblerone(Y_AXIS, LONG, h, b, n, n + 1, h, h + 1, q))
            if b < m:
                wedges.append(Toblerone(Y_AXIS, SHORT, h, b, n + 1, n, h + 1, h, q))
    else:
        raise DomainError(f"unknown direction {direction!r}")
    return wedges


def transpose_staircase(seq: Sequence[int], count: int) -> List[int]:
    """The same side triangulation described from the opposite row of the ladder."""
    return [sum(1 for s in seq if s <= j) for j in range(count)]


# ---------------------------------------------------------------------------
# Strip layouts
# ---------------------------------------------------------------------------


class StripLayout:
    """Triangulated strip plus the monotone paths it offers between side corners."""

    def __init__(self, q: int, squares: int):
        self.q = q
        self.squares = squares

    def triangulation(self) -> SquareTriangulation:
        raise NotImplementedError

    def path(self, near: int, far: int, start: int) -> Tuple[Tuple[SquarePoint, ...], int]:
        """Path from near corner ``near`` to far corner ``far``, using square >= ``start``."""
        raise NotImplementedError

    def supports(self, near: int, far: int, start: int = 0) -> bool:
        try:
            self.path(near, far, start)
        except DomainError:
            return False
        return True


class SquareStrip(StripLayout):
    """Strip made of independently triangulated fundamental squares."""

    def __init__(self, ctx: SquareContext, kinds: Sequence[str], transposed: bool):
        super().__init__(ctx.q, len(kinds))
        self.ctx = ctx
        self.kinds = list(kinds)
        self.transposed = transposed
        self.axis = X_AXIS if transposed else Y_AXIS
        self._triangulation: Optional[SquareTriangulation] = None

    def _local(self, pt: SquarePoint, square: int) -> SquarePoint:
        x, y = pt
        if self.transposed:
            return (y + square * self.q, x)
        return (x + square * self.q, y)

    def triangulation(self) -> SquareTriangulation:
        if self._triangulation is None:
            points: Set[SquarePoint] = set()
            triangles = []
            for s, kind in enumerate(self.kinds):
                tri = square_triangulation(self.ctx, kind)
                points.update(self._local(pt, s) for pt in tri.points)
                for t in tri.triangles:
                    triangles.append(tuple(sorted(self._local(pt, s) for pt in t)))
            self._triangulation = SquareTriangulation(
                tuple(sorted(points)), tuple(sorted(triangles)), frozenset()
            )
        return self._triangulation

    def square_supports(self, s: int) -> bool:
        return 0 <= s < self.squares and square_path(self.ctx, self.kinds[s], self.axis) is not None

    def path(self, near: int, far: int, start: int) -> Tuple[Tuple[SquarePoint, ...], int]:
        q = self.q
        if q == 1:
            return self._diagonal_path(near, far), max(start, min(near, far))
        for s in range(max(start, 0), self.squares):
            if {near, far} <= {s, s + 1} and self.square_supports(s):
                interior = square_path(self.ctx, self.kinds[s], self.axis)
                inner = tuple(self._local(pt, s) for pt in interior)
                pts = ((near * q, 0),) + inner + ((far * q, q),)
                return pts, s
        raise DomainError(f"no square from {start} carries a path from corner {near} to {far}")

    def _diagonal_path(self, near: int, far: int) -> Tuple[SquarePoint, ...]:
        e = edge_key((near, 0), (far, 1))
        if near != far and e not in self.triangulation().edges():
            raise DomainError(f"unit strip has no edge from corner {near} to {far}")
        return ((near, 0), (far, 1))

    @staticmethod
    def diagonal_request(near: int, far: int) -> Optional[Tuple[int, str]]:
        """(square, kind) a unit strip needs for a path from ``near`` to ``far``.

        Rows and columns agree: swapping the coordinates keeps a rising diagonal rising.
        """
        if near == far:
            return None
        if abs(near - far) > 1:
            raise DomainError(f"unit strip cannot join corner {near} to corner {far}")
        return (min(near, far), KIND_RISING if far > near else KIND_FALLING)


class FanStrip(StripLayout):
    """Strip whose side corners are all joined to one shared maximal path."""

    def __init__(self, q: int, residue: int, squares: int, hub: int = 0):
        super().__init__(q, squares)
        self.residue = residue
        self.hub = min(hub, squares - 1)

    def triangulation(self) -> SquareTriangulation:
        return strip_fan_triangulation(self.q, self.residue, self.squares, self.hub)

    def path(self, near: int, far: int, start: int) -> Tuple[Tuple[SquarePoint, ...], int]:
        if not (0 <= near <= self.squares and 0 <= far <= self.squares):
            raise DomainError(f"corner out of range: {near}, {far}")
        q = self.q
        return ((near * q, 0),) + hub_path(q, self.residue, self.hub) + ((far * q, q),), self.hub


class SideStrip(StripLayout):
    """A strip of zero squares: the near and far corners are joined directly."""

    def __init__(self, q: int):
        super().__init__(q, 0)

    def triangulation(self) -> SquareTriangulation:
        return SquareTriangulation(((0, 0), (0, self.q)), (), frozenset())

    def path(self, near: int, far: int, start: int) -> Tuple[Tuple[SquarePoint, ...], int]:
        if near != 0 or far != 0:
            raise DomainError("a strip without squares only joins corner 0 to corner 0")
        return ((0, 0), (0, self.q)), 0


def assign_paths(
    strip: StripLayout, near: Sequence[int], far: Sequence[int]
) -> List[Tuple[SquarePoint, ...]]:
    """Greedy choice of weakly ordered paths realising the side sequences."""
    if len(near) != len(far):
        raise DomainError("near and far side sequences differ in length")
    paths = []
    start = 0
    for t, t_far in zip(near, far):
        pts, start = strip.path(t, t_far, start)
        paths.append(pts)
    return paths


def standard_boundary_paths(
    t: Toblerone, strip: StripLayout
) -> Tuple[List[Tuple[SquarePoint, ...]], List[int]]:
    """Paths with standard sides where the strip allows, shifted by one otherwise.

    Returns the paths and the segment indices whose corners deviate from the standard.
    """
    near, far = t.standard_sides()
    exceptional = []
    for i in range(t.segments):
        if strip.supports(near[i], far[i], 0):
            continue
        for shift in (1, -1):
            cand = near[i] + shift
            if 0 <= cand <= t.squares and strip.supports(cand, cand, 0):
                near[i] = far[i] = cand
                exceptional.append(i)
                break
        else:
            raise DomainError(f"segment {i} of {t} has no path near its standard corner")
    return assign_paths(strip, near, far), exceptional


def free_boundary_paths(
    t: Toblerone, strip: StripLayout, near: Sequence[int], far: Sequence[int]
) -> List[Tuple[SquarePoint, ...]]:
    """Paths realising the requested side triangulations exactly."""
    if len(near) != t.segments or len(far) != t.segments:
        raise DomainError(f"side sequences must have {t.segments} entries")
    for seq in (near, far):
        if any(b < a for a, b in zip(seq, seq[1:])) or any(not 0 <= s <= t.squares for s in seq):
            raise DomainError(
                f"side sequence {list(seq)} is not a staircase of {t.squares} squares"
            )
    return assign_paths(strip, near, far)


# ---------------------------------------------------------------------------
# The prism engine
# ---------------------------------------------------------------------------


def _evaluate(path: Tuple[SquarePoint, ...], ws: List[int], w: Fraction) -> Fraction:
    i = bisect_right(ws, w) - 1
    i = min(max(i, 0), len(path) - 2)
    (u0, w0), (u1, w1) = path[i], path[i + 1]
    return u0 + (u1 - u0) * (w - w0) / Fraction(w1 - w0)


def _check_paths(
    t: Toblerone, strip: SquareTriangulation, paths: Sequence[Tuple[SquarePoint, ...]]
) -> None:
    edges = strip.edges()
    last = t.squares * t.q
    for path in paths:
        if len(path) < 2 or path[0][1] != 0 or path[-1][1] != t.q:
            raise DomainError(f"path {path} does not run from the near side to the far side")
        for a, b in zip(path, path[1:]):
            if b[1] <= a[1]:
                raise DomainError(f"path {path} is not monotone")
            key = edge_key(a, b)
            side = a[0] == b[0] and a[0] in (0, last)
            if key not in edges and not side:
                raise DomainError(f"path edge {key} is not in the strip triangulation")
    for left, right in zip(paths, paths[1:]):
        lw = [pt[1] for pt in left]
        rw = [pt[1] for pt in right]
        for w in set(lw) | set(rw):
            if _evaluate(left, lw, Fraction(w)) > _evaluate(right, rw, Fraction(w)):
                raise DomainError("paths are not weakly ordered")


def triangulate_prism(
    t: Toblerone, strip: SquareTriangulation, paths: Sequence[Tuple[SquarePoint, ...]]
) -> List[Cell]:
    """Cells of the wedge determined by the strip triangulation and one path per segment."""
    if len(paths) != t.segments:
        raise DomainError(f"{t} needs {t.segments} paths, got {len(paths)}")
    _check_paths(t, strip, paths)
    cells: List[Cell] = []
    for i, path in enumerate(paths):
        e0, e1 = t.edge_point(i), t.edge_point(i + 1)
        for a, b in zip(path, path[1:]):
            cells.append((e0, e1, t.strip_point(a), t.strip_point(b)))

    ws = [[pt[1] for pt in path] for path in paths]
    for tri in strip.triangles:
        cu = Fraction(sum(pt[0] for pt in tri), 3)
        cw = Fraction(sum(pt[1] for pt in tri), 3)
        lo, hi = 0, len(paths)
        while lo < hi:
            mid = (lo + hi) // 2
            if cu > _evaluate(paths[mid], ws[mid], cw):
                lo = mid + 1
            else:
                hi = mid
        apex = t.edge_point(lo)
        cells.append((apex,) + tuple(t.strip_point(pt) for pt in tri))
    logger.debug(f"Wedge {t.direction}{t.shape} h={t.h} index={t.index}: {len(cells)} cells")
    return cells


def fan_residue(ctx: SquareContext, direction: str) -> int:
    """Lattice residue of the (along, across) coordinates of strips in ``direction``."""
    if ctx.q == 1:
        return 0
    return ctx.p_prime if direction == X_AXIS else ctx.p_dprime


__all__ = [
    "FanStrip",
    "Layer",
    "SideStrip",
    "SquareStrip",
    "StripLayout",
    "Toblerone",
    "assign_paths",
    "decompose_layer",
    "decompose_layers",
    "fan_residue",
    "free_boundary_paths",
    "layer_direction_feasible",
    "standard_boundary_paths",
    "transpose_staircase",
    "triangulate_prism",
]
