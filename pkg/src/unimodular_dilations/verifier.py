"""Brute-force checks of triangulations, independent of how they were constructed.

Only the primitives of ``lattice_core`` are shared with the constructions; the oracles at
the end exercise the classification and square modules against exhaustive enumeration.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .dilation import triangulate_tetragonal_2
from .empty_simplex import canonical_p, classify
from .fundamental_square import crossing_obstruction, paths_compatible, square_context
from .lattice_core import (
    Cell,
    DomainError,
    LatticeError,
    LatticeSimplex,
    Point,
    Triangulation,
    cross,
    det3,
    dot,
    halfspace_description,
    integer_lattice,
    lattice_points_in,
    line_direction,
    orientation,
    quasi_standard_face,
    sub,
)

logger = logging.getLogger(__name__)

MAX_COUNTEREXAMPLES = 20
SAT_CHUNK = 50_000

Triangle = Tuple[Point, Point, Point]


@dataclass
class VerificationReport:
    """Named pass/fail checks with counterexamples for every failure."""

    name: str
    checks: Dict[str, bool] = field(default_factory=dict)
    counterexamples: Dict[str, List[object]] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)

    def record(self, check: str, ok: bool, counterexample: Optional[List[object]] = None) -> None:
        self.checks[check] = ok
        if not ok:
            found = list(counterexample or [])
            self.counterexamples[check] = found[:MAX_COUNTEREXAMPLES] or [f"{check} failed"]
            logger.warning(f"{self.name}: check {check} failed")

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        merged = VerificationReport(f"{self.name}+{other.name}")
        for report in (self, other):
            for check, ok in report.checks.items():
                key = f"{report.name}.{check}"
                merged.checks[key] = ok
                if check in report.counterexamples:
                    merged.counterexamples[key] = report.counterexamples[check]
            merged.counts.update({f"{report.name}.{k}": v for k, v in report.counts.items()})
        return merged

    def to_json(self) -> Dict[str, object]:
        def plain(value):
            if isinstance(value, (list, tuple)):
                return [plain(v) for v in value]
            if isinstance(value, Fraction):
                return str(value)
            return value

        return {
            "name": self.name,
            "passed": self.passed,
            "checks": dict(self.checks),
            "counterexamples": {k: plain(v) for k, v in self.counterexamples.items()},
            "counts": dict(self.counts),
        }


# ---------------------------------------------------------------------------
# Region geometry
# ---------------------------------------------------------------------------


def _facets(region: Sequence[Point]) -> List[Tuple[Point, int, List[Point]]]:
    equalities, inequalities = halfspace_description(region)
    if equalities:
        raise DomainError("region is not full-dimensional")
    return [
        (normal, bound, [v for v in region if dot(normal, v) == bound])
        for normal, bound in inequalities
    ]


def _polygon_ring(points: Sequence[Point], normal: Point) -> List[Point]:
    """Corners of a planar convex polygon in cyclic order, collinear points dropped."""
    drop = max(range(3), key=lambda i: abs(normal[i]))
    keep = [i for i in range(3) if i != drop]
    flat = sorted({(v[keep[0]], v[keep[1]]): v for v in points}.items())

    def turn(o, a, b) -> int:
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def chain(items):
        hull: List = []
        for item in items:
            while len(hull) >= 2 and turn(hull[-2][0], hull[-1][0], item[0]) <= 0:
                hull.pop()
            hull.append(item)
        return hull[:-1]

    ring = chain(flat) + chain(list(reversed(flat)))
    return [v for _, v in ring]


def region_volume(region: Sequence[Point]) -> int:
    """Six times the Euclidean volume of conv(region), exactly."""
    region = [tuple(v) for v in region]
    apex = region[0]
    total = 0
    for normal, _, verts in _facets(region):
        ring = _polygon_ring(verts, normal)
        base = ring[0]
        for a, b in zip(ring[1:], ring[2:]):
            total += abs(det3(sub(base, apex), sub(a, apex), sub(b, apex)))
    return total


def _triangle_counts(cells: Sequence[Cell]) -> Dict[Triangle, int]:
    counts: Dict[Triangle, int] = {}
    for cell in cells:
        for face in combinations(sorted(cell), 3):
            counts[face] = counts.get(face, 0) + 1  # type: ignore[index]
    return counts


def boundary_triangles(cells: Sequence[Cell]) -> List[Triangle]:
    return sorted(t for t, n in _triangle_counts(cells).items() if n == 1)


def boundary_edges(cells: Sequence[Cell]) -> Set[Tuple[Point, Point]]:
    edges = set()
    for a, b, c in boundary_triangles(cells):
        edges.update({(a, b), (a, c), (b, c)})
    return edges


# ---------------------------------------------------------------------------
# Pairwise interior disjointness
# ---------------------------------------------------------------------------

_FACES = np.array([(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)])
_EDGES = np.array(list(combinations(range(4), 2)))


def _axes(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    f = t[:, _FACES]
    normals = np.cross(f[:, :, 1] - f[:, :, 0], f[:, :, 2] - f[:, :, 0])
    edges = t[:, _EDGES[:, 1]] - t[:, _EDGES[:, 0]]
    return normals, edges


def _overlapping(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Mask of pairs whose interiors meet; no axis among face normals and edge products separates them."""
    na, ea = _axes(a)
    nb, eb = _axes(b)
    mixed = np.cross(ea[:, :, None, :], eb[:, None, :, :]).reshape(len(a), -1, 3)
    axes = np.concatenate([na, nb, mixed], axis=1)
    pa = np.einsum("nav,npv->nap", axes, a)
    pb = np.einsum("nav,npv->nap", axes, b)
    separated = (pa.max(-1) <= pb.min(-1)) | (pb.max(-1) <= pa.min(-1))
    separated &= np.any(axes != 0, axis=-1)
    return ~separated.any(axis=1)


def _overlap_chunk(args: Tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    return _overlapping(*args)


def candidate_pairs(points: np.ndarray) -> np.ndarray:
    """Index pairs of cells whose bounding boxes overlap with positive volume."""
    lo, hi = points.min(axis=1), points.max(axis=1)
    order = np.argsort(lo[:, 0], kind="stable")
    lo, hi = lo[order], hi[order]
    pairs = []
    for i in range(len(order)):
        end = np.searchsorted(lo[:, 0], hi[i, 0], side="left")
        if end <= i + 1:
            continue
        j = np.arange(i + 1, end)
        keep = np.all((lo[j, 1:] < hi[i, 1:]) & (lo[i, 1:] < hi[j, 1:]), axis=1)
        keep &= lo[i, 0] < hi[j, 0]
        if keep.any():
            pairs.append(np.stack([np.full(int(keep.sum()), i), j[keep]], axis=1))
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64)
    found = np.concatenate(pairs)
    return order[found]


def overlapping_pairs(cells: Sequence[Cell], jobs: int = 1) -> List[Tuple[int, int]]:
    points = np.array(cells, dtype=np.int64)
    pairs = candidate_pairs(points)
    chunks = [
        (points[pairs[s : s + SAT_CHUNK, 0]], points[pairs[s : s + SAT_CHUNK, 1]])
        for s in range(0, len(pairs), SAT_CHUNK)
    ]
    if jobs > 1 and len(chunks) > 1:
        with Pool(jobs) as pool:
            masks = pool.map(_overlap_chunk, chunks)
    else:
        masks = [_overlap_chunk(c) for c in chunks]
    if not masks:
        return []
    mask = np.concatenate(masks)
    logger.debug(f"Tested {len(pairs)} candidate pairs, {int(mask.sum())} overlap")
    return [(int(a), int(b)) for a, b in pairs[mask]]


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def verify_complex(
    tri: Triangulation,
    region: Sequence[Point],
    jobs: int = 1,
    require_all_points: bool = False,
) -> VerificationReport:
    """Checks that the cells tile ``region`` as a simplicial complex.

    (a) positive volumes, (b) volume budget, (c) face matching, (d) interiors disjoint,
    (e) vertices are lattice points of the region.
    """
    report = VerificationReport("complex")
    cells = tri.cells()
    lattice = tri.lattice
    region = [tuple(int(c) for c in v) for v in region]
    report.counts["cells"] = len(cells)
    report.counts["vertices"] = len(tri.vertices)

    flat = [cell for cell in cells if orientation(*cell) == 0]
    report.record("positive_volume", not flat, flat)

    facets = _facets(region)
    covolume = lattice.covolume
    budget = region_volume(region)
    total = sum(abs(orientation(*cell)) for cell in cells)
    report.counts["volume"] = total // covolume
    report.counts["region_volume"] = budget // covolume
    report.record("volume_budget", total == budget, [f"cells {total} != region {budget}"])

    bad_faces = []
    boundary = interior = 0
    for face, n in _triangle_counts(cells).items():
        on_boundary = any(all(dot(normal, v) == bound for v in face) for normal, bound, _ in facets)
        if on_boundary:
            boundary += 1
        else:
            interior += 1
        if n != (1 if on_boundary else 2):
            bad_faces.append({"triangle": face, "cells": n, "boundary": on_boundary})
    report.counts["boundary_triangles"] = boundary
    report.counts["interior_triangles"] = interior
    report.record("face_matching", not bad_faces, bad_faces)

    overlaps = overlapping_pairs(cells, jobs)
    report.record(
        "interiors_disjoint", not overlaps, [{"cells": [cells[a], cells[b]]} for a, b in overlaps]
    )

    outside = [
        v
        for v in tri.vertices
        if not lattice.contains(v) or any(dot(normal, v) < bound for normal, bound, _ in facets)
    ]
    report.record("vertices_in_region", not outside, outside)

    if require_all_points:
        points = lattice_points_in(region, lattice)
        report.counts["region_points"] = len(points)
        missing = sorted(set(points) - set(tri.vertices))
        report.record("all_points_used", not missing, missing)
    return report


def verify_unimodular(tri: Triangulation) -> VerificationReport:
    report = VerificationReport("unimodular")
    covolume = tri.lattice.covolume
    heavy = [
        {"cell": cell, "volume": abs(orientation(*cell)) // covolume}
        for cell in tri.cells()
        if abs(orientation(*cell)) != covolume
    ]
    report.counts["non_unimodular"] = len(heavy)
    report.record("unimodular", not heavy, heavy)
    return report


def _barycentric(face: Sequence[Point], k: int, v: Point) -> Tuple[int, int, int]:
    a, b, c = face
    ab, ac = sub(b, a), sub(c, a)
    normal = cross(ab, ac)
    area = dot(normal, normal)
    rel = sub(v, tuple(k * x for x in a))
    s = Fraction(dot(cross(rel, ac), normal), area)
    t = Fraction(dot(cross(ab, rel), normal), area)
    if s.denominator != 1 or t.denominator != 1:
        raise DomainError(f"point {v} is not on the lattice grid of the facet")
    return (k - int(s) - int(t), int(s), int(t))


def facet_edge_sets(tri: Triangulation, simplex: Sequence[Point], k: int) -> List[frozenset]:
    """Per facet of k * simplex, boundary edges in barycentric coordinates of that facet."""
    simplex = [tuple(v) for v in simplex]
    edges = boundary_edges(tri.cells())
    out = []
    for drop in range(4):
        face = [v for i, v in enumerate(simplex) if i != drop]
        plane = [tuple(k * x for x in v) for v in face]
        on_facet = [
            (u, v) for u, v in edges if orientation(*plane, u) == 0 and orientation(*plane, v) == 0
        ]
        out.append(
            frozenset(
                tuple(sorted((_barycentric(face, k, u), _barycentric(face, k, v))))
                for u, v in on_facet
            )
        )
    return out


def verify_boundary(
    tri: Triangulation, simplex: Sequence[Point], k: int, style: str
) -> VerificationReport:
    """Boundary of a triangulation of k * simplex against the declared style."""
    style = str(getattr(style, "value", style))
    report = VerificationReport(f"boundary[{style}]")
    simplex = [tuple(v) for v in simplex]
    allowed = {line_direction(sub(b, a)) for a, b in combinations(simplex, 2)}
    edges = boundary_edges(tri.cells())
    odd = sorted((a, b) for a, b in edges if line_direction(sub(b, a)) not in allowed)
    report.counts["boundary_edges"] = len(edges)
    report.counts["non_standard_edges"] = len(odd)
    if style == "standard":
        report.record("standard", not odd, odd)
    elif style == "quasi-standard":
        expected = quasi_standard_face(k)
        mismatched = []
        for i, found in enumerate(facet_edge_sets(tri, simplex, k)):
            if found != expected:
                mismatched.append(
                    {
                        "facet": i,
                        "missing": sorted(expected - found),
                        "unexpected": sorted(found - expected),
                    }
                )
        report.record("quasi_standard", not mismatched, mismatched)
    else:
        report.counts["listed"] = len(odd)
        report.checks["listed"] = True
        if odd:
            report.counterexamples["non_standard_edges"] = odd[:MAX_COUNTEREXAMPLES]
    return report


def verify_all(
    tri: Triangulation,
    simplex: Sequence[Point],
    k: int,
    style: Optional[str] = None,
    jobs: int = 1,
    unimodular: bool = True,
) -> VerificationReport:
    """Complex, unimodularity and boundary checks for a triangulation of k * simplex."""
    region = [tuple(k * c for c in v) for v in simplex]
    report = verify_complex(tri, region, jobs=jobs, require_all_points=unimodular)
    if unimodular:
        report = report.merge(verify_unimodular(tri))
    if style is not None:
        report = report.merge(verify_boundary(tri, simplex, k, style))
    return report


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def _white(p: int, q: int) -> List[Point]:
    return [(0, 0, 0), (1, 0, 0), (0, 0, 1), (p, q, 1)]


def _width_along(verts: Sequence[Point], pair: Tuple[Tuple[int, int], Tuple[int, int]]) -> int:
    (a, b), (c, d) = pair
    normal = cross(sub(verts[b], verts[a]), sub(verts[d], verts[c]))
    g = gcd(gcd(abs(normal[0]), abs(normal[1])), abs(normal[2]))
    values = [dot(normal, v) // g for v in verts]
    return max(values) - min(values)


def _orbit(p: int, q: int) -> Set[int]:
    inverse = pow(p, -1, q)
    return {p % q, (-p) % q, inverse, (-inverse) % q}


MAX_ORACLE_BOX = 4


def oracle_white(q_max: int, box: int = 2) -> VerificationReport:
    """Every empty tetrahedron has width one and is classified consistently.

    Besides the white tetrahedra up to ``q_max``, every empty tetrahedron with a vertex
    at the origin inside the cube of side ``box`` (at most 4) is classified.
    """
    if q_max < 1:
        raise DomainError("q_max must be at least 1")
    if not 1 <= box <= MAX_ORACLE_BOX:
        raise DomainError(f"box side must be between 1 and {MAX_ORACLE_BOX}, got {box}")
    report = VerificationReport("white")
    pairs = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
    not_empty, wide, unstable = [], [], []
    for q in range(1, q_max + 1):
        for p in range(q):
            if gcd(p, q) != 1:
                continue
            verts = _white(p, q)
            if len(lattice_points_in(verts)) != 4:
                not_empty.append((p, q))
            if not any(_width_along(verts, pair) == 1 for pair in pairs):
                wide.append((p, q))
            if q > 1 and len({canonical_p(r, q) for r in _orbit(p, q)}) != 1:
                unstable.append((p, q))
    report.record("white_empty", not not_empty, not_empty)
    report.record("width_one", not wide, wide)
    report.record("canonical_on_orbits", not unstable, unstable)

    failures, seen = [], 0
    grid = [v for v in product(range(box + 1), repeat=3) if v != (0, 0, 0)]
    for a, b, c in combinations(grid, 3):
        verts = [(0, 0, 0), a, b, c]
        if orientation(*verts) == 0 or len(lattice_points_in(verts)) != 4:
            continue
        seen += 1
        try:
            classify(LatticeSimplex(tuple(verts), integer_lattice()))
        except LatticeError as e:
            failures.append({"vertices": verts, "error": str(e)})
    report.counts["box_empty_tetrahedra"] = seen
    report.record("box_classified", not failures, failures)
    return report


def oracle_k2(q_max: int) -> VerificationReport:
    """Second dilations: compatible maximal paths exactly for p = +-1 (mod q)."""
    if q_max < 2:
        raise DomainError("q_max must be at least 2")
    report = VerificationReport("k2")
    mismatch, missing, broken = [], [], []
    for q in range(2, q_max + 1):
        for p in range(q):
            if gcd(p, q) != 1:
                continue
            ctx = square_context(p, q)
            tetragonal = p in (1, q - 1)
            if paths_compatible(ctx) != tetragonal:
                mismatch.append((p, q))
            if not tetragonal and crossing_obstruction(ctx) is None:
                missing.append((p, q))
        tri = triangulate_tetragonal_2(q)
        simplex = [(0, 0, 0), (q, 0, 0), (0, 0, 1), (0, q, 1)]
        checked = verify_all(tri, simplex, 2, "standard")
        if not checked.passed or len(tri.tetrahedra) != 8 * q:
            broken.append({"q": q, "cells": len(tri.tetrahedra), "failed": _failed(checked)})
    report.record("compatible_iff_tetragonal", not mismatch, mismatch)
    report.record("obstruction_exhibited", not missing, missing)
    report.record("tetragonal_2_valid", not broken, broken)
    return report


def _failed(report: VerificationReport) -> List[str]:
    return [name for name, ok in report.checks.items() if not ok]
