"""Classification of empty lattice tetrahedra into White's canonical form."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import permutations, product
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix

from .lattice_core import (
    AffineLatticeMap,
    AmbientLattice,
    DomainError,
    InternalError,
    LatticeSimplex,
    Point,
    cross,
    dot,
    integer_lattice,
    lattice_points_in,
    mod_inverse,
    right_angled_lattice,
    right_angled_vertices,
    sub,
)

logger = logging.getLogger(__name__)

# The three ways of splitting four vertices into two disjoint edges.
OPPOSITE_EDGE_PAIRS: Tuple[Tuple[Tuple[int, int], Tuple[int, int]], ...] = (
    ((0, 1), (2, 3)),
    ((0, 2), (1, 3)),
    ((0, 3), (1, 2)),
)


@dataclass(frozen=True)
class EmptyClass:
    """White parameters (p, q) and the unimodular map onto the canonical tetrahedron."""

    p: int
    q: int
    to_canonical: AffineLatticeMap
    pair: int = 0

    @property
    def canonical_p(self) -> int:
        return canonical_p(self.p, self.q)


@dataclass(frozen=True)
class WidthResult:
    width: int
    functional: Point
    certified: bool


def white_vertices(p: int, q: int) -> List[Point]:
    return [(0, 0, 0), (1, 0, 0), (0, 0, 1), (p, q, 1)]


def white_simplex(p: int, q: int) -> LatticeSimplex:
    return LatticeSimplex(tuple(white_vertices(p, q)), integer_lattice())


def pair_index(edge_a: Tuple[int, int], edge_b: Tuple[int, int]) -> int:
    key = {tuple(sorted(edge_a)), tuple(sorted(edge_b))}
    for index, pair in enumerate(OPPOSITE_EDGE_PAIRS):
        if set(pair) == key:
            return index
    raise DomainError(f"edges {edge_a} and {edge_b} are not opposite")


def is_empty(s: LatticeSimplex) -> bool:
    return len(lattice_points_in(s.vertices, s.lattice)) == 4


def _coordinates(s: LatticeSimplex) -> List[Point]:
    """Vertices in integer basis coordinates of the simplex's lattice."""
    to_coords = s.lattice.coordinate_map()
    return [to_coords.apply(v) for v in s.vertices]


def width_wrt_opposite_edges(s: LatticeSimplex, pair: int) -> int:
    """Width under the primitive functional constant on both edges of ``pair``."""
    verts = _coordinates(s)
    (a, b), (c, d) = OPPOSITE_EDGE_PAIRS[pair]
    normal = cross(sub(verts[b], verts[a]), sub(verts[d], verts[c]))
    g = gcd(gcd(abs(normal[0]), abs(normal[1])), abs(normal[2]))
    values = [dot(normal, v) // g for v in verts]
    return max(values) - min(values)


def width_one_pairs(s: LatticeSimplex) -> List[int]:
    return [i for i in range(3) if width_wrt_opposite_edges(s, i) == 1]


def lattice_width(
    vertices: Sequence[Point],
    lattice: Optional[AmbientLattice] = None,
    search_bound: Optional[int] = None,
) -> WidthResult:
    """Brute-force lattice width over primitive functionals with bounded coefficients.

    Without ``search_bound`` the coefficients range up to the normalized volume of the
    first full-dimensional corner with its common edge factor removed, which is q for an
    empty simplex of class (p, q) and for each of its dilations.
    """
    lattice = lattice or integer_lattice()
    to_coords = lattice.coordinate_map()
    coords = np.array([to_coords.apply(v) for v in vertices], dtype=np.int64)
    if search_bound is None:
        edges = _corner_edges(coords)
        factor = reduce(gcd, (abs(int(e)) for e in edges))
        search_bound = max(abs(int(edges.det())) // factor**3, 1)
    rng = range(-search_bound, search_bound + 1)
    functionals = np.array(
        [
            f
            for f in product(rng, rng, rng)
            if f > (0, 0, 0) and gcd(gcd(abs(f[0]), abs(f[1])), abs(f[2])) == 1
        ],
        dtype=np.int64,
    )
    values = functionals @ coords.T
    widths = values.max(axis=1) - values.min(axis=1)
    best = int(np.argmin(np.where(widths > 0, widths, np.iinfo(np.int64).max)))
    width = int(widths[best])
    functional = tuple(int(c) for c in functionals[best])
    certified = search_bound >= _coefficient_bound(coords, width)
    if not certified:
        logger.warning(f"Width search with bound {search_bound} is not certified (width {width})")
    return WidthResult(width, functional, certified)


def _corner_edges(coords: np.ndarray) -> Matrix:
    """Edge vectors at the first vertex spanning a full-dimensional corner."""
    base = [int(c) for c in coords[0]]
    for rows in permutations(range(1, len(coords)), 3):
        edges = Matrix([[int(c) for c in coords[r]] for r in rows]) - Matrix([base] * 3)
        if edges.det() != 0:
            return edges
    raise DomainError("polytope is not full-dimensional")


def _coefficient_bound(coords: np.ndarray, width: int) -> Fraction:
    """Bound on the coefficients of any functional whose width does not exceed ``width``."""
    inv = _corner_edges(coords).inv()
    return width * max(sum(abs(inv[j, i]) for i in range(3)) for j in range(3))


def canonical_p(p: int, q: int) -> int:
    """Smallest representative of {p, -p, 1/p, -1/p} modulo q."""
    if q == 1:
        return 0
    inverse = mod_inverse(p, q)
    return min(p % q, (-p) % q, inverse, (-inverse) % q)


def classify(s: LatticeSimplex) -> EmptyClass:
    """White parameters of an empty simplex together with the normalising map.

    Tetragonal simplices have two width-one pairs of opposite edges; the lowest pair
    index wins, then the smallest p, then the first vertex order.
    """
    if not is_empty(s):
        raise DomainError(f"simplex {s.vertices} is not empty")
    to_coords = s.lattice.coordinate_map()
    verts = [to_coords.apply(v) for v in s.vertices]

    best: Optional[Tuple[int, int, Tuple[int, ...], AffineLatticeMap]] = None
    q = 0
    for order in permutations(range(4)):
        a, b, c, d = (verts[i] for i in order)
        edges = Matrix([sub(b, a), sub(c, a), sub(d, a)]).T
        q = abs(int(edges.det()))
        w = edges.inv()
        # rows of the target matrix times the inverse: w1 + p w3, q w3, w2 + w3
        if not all((w[1, j] + w[2, j]).is_integer for j in range(3)):
            continue
        p = next(
            (
                cand
                for cand in range(q)
                if all((w[0, j] + cand * w[2, j]).is_integer for j in range(3))
            ),
            None,
        )
        if p is None:
            continue
        pair = pair_index((order[0], order[1]), (order[2], order[3]))
        key = (pair, p, order)
        if best is not None and key >= best[:3]:
            continue
        target = Matrix([[1, 0, p], [0, 0, q], [0, 1, 1]])
        linear = target * w
        shift = -(linear * Matrix(a))
        affine = AffineLatticeMap(
            tuple(tuple(int(linear[r, col]) for col in range(3)) for r in range(3)),
            tuple(int(x) for x in shift),
        )
        best = (pair, p, order, affine)

    if best is None:
        raise InternalError(f"no width-one pair of opposite edges found for {s.vertices}")
    pair, p, order, affine = best
    logger.debug(f"Classified {s.vertices} as ({p},{q}) via pair {pair}, order {order}")
    return EmptyClass(p, q, affine.compose(to_coords), pair)


def to_right_angled(cls: EmptyClass) -> Tuple[LatticeSimplex, AffineLatticeMap]:
    """The right-angled model of the class and the map from the input simplex onto it."""
    simplex = LatticeSimplex(
        tuple(right_angled_vertices(cls.q)), right_angled_lattice(cls.p, cls.q)
    )
    return simplex, right_angled_map(cls.p, cls.q).compose(cls.to_canonical)


def right_angled_map(p: int, q: int) -> AffineLatticeMap:
    """(x, y, z) -> (qx - py, y, z), carrying Z^3 onto the right-angled lattice."""
    return AffineLatticeMap(((q, -p, 0), (0, 1, 0), (0, 0, 1)))


def is_tetragonal(cls: EmptyClass) -> bool:
    return tetragonal(cls.p, cls.q)


def tetragonal(p: int, q: int) -> bool:
    return canonical_p(p, q) in (0, 1)
