"""Exact lattice primitives shared by every construction and by the verifier."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy import Matrix

logger = logging.getLogger(__name__)

Point = Tuple[int, int, int]
Matrix3 = Tuple[Tuple[int, int, int], Tuple[int, int, int], Tuple[int, int, int]]

IDENTITY: Matrix3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


class LatticeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LatticeError, ValueError):
    """Input violates a precondition or asks for a construction that does not exist."""


class InternalError(LatticeError, RuntimeError):
    """A situation the underlying theory rules out; always surfaced to the caller."""


# ---------------------------------------------------------------------------
# Integer vector helpers
# ---------------------------------------------------------------------------


def sub(a: Sequence[int], b: Sequence[int]) -> Point:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def add(a: Sequence[int], b: Sequence[int]) -> Point:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def scale(a: Sequence[int], k: int) -> Point:
    return (a[0] * k, a[1] * k, a[2] * k)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Sequence[int], b: Sequence[int]) -> Point:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def det3(a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> int:
    """Determinant of the matrix whose rows are a, b, c."""
    return dot(a, cross(b, c))


def orientation(a: Point, b: Point, c: Point, d: Point) -> int:
    """Signed volume (times 6) of the tetrahedron abcd."""
    return det3(sub(b, a), sub(c, a), sub(d, a))


def primitive(v: Sequence[int]) -> Point:
    """Primitive integer vector with the direction of v (v must be nonzero)."""
    g = gcd(gcd(abs(v[0]), abs(v[1])), abs(v[2]))
    if g == 0:
        raise DomainError("zero vector has no primitive direction")
    return (v[0] // g, v[1] // g, v[2] // g)


def line_direction(v: Sequence[int]) -> Point:
    """Primitive direction of v with a sign convention, so parallel vectors compare equal."""
    d = primitive(v)
    for c in d:
        if c != 0:
            return d if c > 0 else (-d[0], -d[1], -d[2])
    return d


# ---------------------------------------------------------------------------
# Lattices and maps
# ---------------------------------------------------------------------------


def mod_inverse(a: int, q: int) -> int:
    """Inverse of a modulo q, in [1, q-1]."""
    if q < 2:
        raise DomainError(f"modulus must be at least 2, got {q}")
    if gcd(a % q, q) != 1:
        raise DomainError(f"{a} is not invertible modulo {q}")
    return int(sympy.mod_inverse(a % q, q))


def _transpose(m: Sequence[Sequence[int]]) -> Matrix3:
    return tuple(tuple(int(m[r][c]) for r in range(3)) for c in range(3))  # type: ignore[return-value]


def _as_matrix3(m: Sequence[Sequence[int]]) -> Matrix3:
    rows = tuple(tuple(int(x) for x in row) for row in m)
    if len(rows) != 3 or any(len(row) != 3 for row in rows):
        raise DomainError("expected a 3x3 integer matrix")
    return rows  # type: ignore[return-value]


@dataclass(frozen=True)
class AmbientLattice:
    """Rank-3 lattice given by an integer basis (columns of ``basis``)."""

    basis: Matrix3
    name: str = "custom"
    _adjugate: Matrix3 = field(init=False, repr=False, compare=False)
    _det: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        basis = _as_matrix3(self.basis)
        object.__setattr__(self, "basis", basis)
        m = Matrix(basis)
        det = int(m.det())
        if det == 0:
            raise DomainError("lattice basis is singular")
        object.__setattr__(self, "_det", det)
        object.__setattr__(self, "_adjugate", _as_matrix3(m.adjugate().tolist()))

    @property
    def covolume(self) -> int:
        return abs(self._det)

    def contains(self, v: Sequence[int]) -> bool:
        det = self._det
        return all(dot(row, v) % det == 0 for row in self._adjugate)

    @property
    def determinant(self) -> int:
        return self._det

    def coordinate_map(self) -> "AffineLatticeMap":
        """Map taking lattice points to their integer basis coordinates."""
        sign = 1 if self._det > 0 else -1
        linear = tuple(tuple(sign * x for x in row) for row in self._adjugate)
        return AffineLatticeMap(linear, (0, 0, 0), abs(self._det))

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorised membership for an (n, 3) int64 array."""
        coords = points @ np.array(self._adjugate, dtype=np.int64).T
        return np.all(coords % self._det == 0, axis=1)

    def basis_vectors(self) -> List[Point]:
        return list(_transpose(self.basis))

    def to_json(self) -> List[List[int]]:
        return [list(row) for row in self.basis]


def integer_lattice() -> AmbientLattice:
    return AmbientLattice(IDENTITY, name="Z3")


@lru_cache(maxsize=None)
def right_angled_lattice(p: int, q: int) -> AmbientLattice:
    """The lattice with x = p'y (mod q), p' = -p mod q, basis (q,0,0), (p',1,0), (0,0,1)."""
    if q == 1:
        return integer_lattice()
    p_prime = (-p) % q
    basis = ((q, p_prime, 0), (0, 1, 0), (0, 0, 1))
    return AmbientLattice(basis, name=f"Lambda({p},{q})")


@dataclass(frozen=True)
class AffineLatticeMap:
    """v -> (linear @ v + translation) / denominator, with exact integer division."""

    linear: Matrix3
    translation: Point = (0, 0, 0)
    denominator: int = 1

    def __post_init__(self):
        object.__setattr__(self, "linear", _as_matrix3(self.linear))
        object.__setattr__(self, "translation", tuple(int(c) for c in self.translation))
        if self.denominator <= 0:
            raise DomainError("map denominator must be positive")

    def apply(self, v: Sequence[int]) -> Point:
        d = self.denominator
        out = []
        for row, t in zip(self.linear, self.translation):
            num = dot(row, v) + t
            if num % d:
                raise DomainError(f"point {tuple(v)} does not map to an integer point")
            out.append(num // d)
        return (out[0], out[1], out[2])

    def determinant(self) -> Fraction:
        return Fraction(int(Matrix(self.linear).det()), self.denominator**3)

    def compose(self, inner: "AffineLatticeMap") -> "AffineLatticeMap":
        """The map self after inner."""
        lin = Matrix(self.linear) * Matrix(inner.linear)
        trans = Matrix(self.linear) * Matrix(inner.translation) + Matrix(
            self.translation
        ) * inner.denominator
        return _reduced(lin, trans, self.denominator * inner.denominator)

    def inverse(self) -> "AffineLatticeMap":
        lin = Matrix(self.linear)
        if lin.det() == 0:
            raise DomainError("map is not invertible")
        inv = lin.inv() * self.denominator
        trans = -inv * Matrix(self.translation) / self.denominator
        return _from_rational(inv, trans)

    def is_unimodular_between(self, source: AmbientLattice, target: AmbientLattice) -> bool:
        """True iff the map carries ``source`` bijectively onto ``target``."""
        try:
            if not target.contains(self.apply((0, 0, 0))):
                return False
        except DomainError:
            return False
        linear_part = AffineLatticeMap(self.linear, (0, 0, 0), self.denominator)
        for b in source.basis_vectors():
            try:
                if not target.contains(linear_part.apply(b)):
                    return False
            except DomainError:
                return False
        return abs(self.determinant()) * source.covolume == target.covolume


def _reduced(lin: Matrix, trans: Matrix, denominator: int) -> AffineLatticeMap:
    entries = [int(x) for x in list(lin) + list(trans)]
    g = denominator
    for x in entries:
        g = gcd(g, x)
    return AffineLatticeMap(
        tuple(tuple(int(lin[r, c]) // g for c in range(3)) for r in range(3)),
        tuple(int(trans[r]) // g for r in range(3)),
        denominator // g,
    )


def _from_rational(lin: Matrix, trans: Matrix) -> AffineLatticeMap:
    denominator = int(sympy.ilcm(1, *[sympy.Rational(x).q for x in list(lin) + list(trans)]))
    return _reduced(lin * denominator, trans * denominator, denominator)


def identity_map() -> AffineLatticeMap:
    return AffineLatticeMap(IDENTITY)


def translation_map(t: Sequence[int]) -> AffineLatticeMap:
    return AffineLatticeMap(IDENTITY, tuple(t))


def map_from_images(source: Sequence[Point], target: Sequence[Point]) -> AffineLatticeMap:
    """The affine map sending the four points of ``source`` to those of ``target``."""
    src = Matrix([list(sub(v, source[0])) for v in source[1:]]).T
    dst = Matrix([list(sub(v, target[0])) for v in target[1:]]).T
    if src.det() == 0:
        raise DomainError("source points are affinely dependent")
    lin = dst * src.inv()
    trans = Matrix(target[0]) - lin * Matrix(source[0])
    return _from_rational(lin, trans)


# ---------------------------------------------------------------------------
# Simplices and polytopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeSimplex:
    vertices: Tuple[Point, Point, Point, Point]
    lattice: AmbientLattice = field(default_factory=integer_lattice)

    def __post_init__(self):
        verts = tuple(tuple(int(c) for c in v) for v in self.vertices)
        if len(verts) != 4:
            raise DomainError("a 3-simplex needs exactly four vertices")
        object.__setattr__(self, "vertices", verts)
        if self.edge_determinant() == 0:
            raise DomainError("simplex vertices are affinely dependent")

    def edge_determinant(self) -> int:
        return orientation(*self.vertices)


def normalized_volume(s: LatticeSimplex) -> int:
    """Normalized volume of ``s`` with respect to its lattice."""
    for v in s.vertices:
        if not s.lattice.contains(v):
            raise DomainError(f"vertex {v} is not a point of {s.lattice.name}")
    det = abs(s.edge_determinant())
    if det % s.lattice.covolume:
        raise DomainError("edge determinant is not a multiple of the covolume")
    return det // s.lattice.covolume


def affine_rank(points: Sequence[Point]) -> int:
    if not points:
        raise DomainError("empty point set")
    diffs = [sub(v, points[0]) for v in points[1:]]
    if not diffs:
        return 0
    return int(Matrix(diffs).rank())


def _integer_nullspace(rows: Sequence[Sequence[int]]) -> List[Point]:
    vectors = []
    for v in Matrix(rows).nullspace():
        den = int(sympy.ilcm(1, *[sympy.Rational(x).q for x in v]))
        vectors.append(tuple(int(x * den) for x in v))
    return vectors


def halfspace_description(
    vertices: Sequence[Point],
) -> Tuple[List[Tuple[Point, int]], List[Tuple[Point, int]]]:
    """Equalities (a, b) meaning a.x == b and inequalities meaning a.x >= b of conv(vertices)."""
    verts = sorted(set(tuple(v) for v in vertices))
    rank = affine_rank(verts)
    v0 = verts[0]
    equalities: List[Tuple[Point, int]] = []
    inequalities: List[Tuple[Point, int]] = []

    def keep(normal: Point, base: Point):
        values = [dot(normal, sub(v, base)) for v in verts]
        if all(x >= 0 for x in values) and any(x > 0 for x in values):
            n = primitive(normal)
            inequalities.append((n, dot(n, base)))

    if rank == 0:
        equalities = [((1, 0, 0), v0[0]), ((0, 1, 0), v0[1]), ((0, 0, 1), v0[2])]
    elif rank == 1:
        d = primitive(sub(verts[-1], v0))
        others = [primitive(x) for x in _integer_nullspace([d])]
        equalities = [(n, dot(n, v0)) for n in others]
        values = [dot(d, v) for v in verts]
        inequalities = [(d, min(values)), (scale(d, -1), -max(values))]
    elif rank == 2:
        normal = next(
            cross(sub(a, v0), sub(b, v0))
            for a, b in combinations(verts[1:], 2)
            if cross(sub(a, v0), sub(b, v0)) != (0, 0, 0)
        )
        normal = primitive(normal)
        equalities = [(normal, dot(normal, v0))]
        for a, b in combinations(verts, 2):
            m = cross(normal, sub(b, a))
            keep(m, a)
            keep(scale(m, -1), a)
    else:
        for a, b, c in combinations(verts, 3):
            n = cross(sub(b, a), sub(c, a))
            if n == (0, 0, 0):
                continue
            keep(n, a)
            keep(scale(n, -1), a)
    return equalities, sorted(set(inequalities))


def lattice_points_in(
    vertices: Sequence[Point], lattice: Optional[AmbientLattice] = None
) -> List[Point]:
    """All points of ``lattice`` in conv(vertices), lexicographically ordered."""
    lattice = lattice or integer_lattice()
    verts = np.array(vertices, dtype=np.int64)
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    axes = [np.arange(lo[i], hi[i] + 1, dtype=np.int64) for i in range(3)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    mask = lattice.contains_many(grid)
    equalities, inequalities = halfspace_description([tuple(v) for v in vertices])
    for normal, bound in equalities:
        mask &= grid @ np.array(normal, dtype=np.int64) == bound
    for normal, bound in inequalities:
        mask &= grid @ np.array(normal, dtype=np.int64) >= bound
    return [tuple(int(c) for c in row) for row in grid[mask]]


def dilate(vertices: Iterable[Sequence[int]], k: int) -> List[Point]:
    return [scale(v, k) for v in vertices]


def right_angled_vertices(q: int) -> List[Point]:
    return [(0, 0, 0), (q, 0, 0), (0, 0, 1), (0, q, 1)]


def dilated_point_count(q: int, k: int) -> int:
    """Number of lattice points of k times the right-angled tetrahedron of parameter q."""
    return int(sympy.binomial(k + 3, 3) + sympy.binomial(k + 1, 3) * (q - 1))


def ehrhart_polynomial(
    vertices: Sequence[Point], lattice: Optional[AmbientLattice] = None, k_max: int = 4
) -> sympy.Poly:
    """Cubic interpolating the lattice-point counts of kP for k = 0..3.

    Counts for k = 4..k_max are compared against the interpolant.
    """
    k = sympy.Symbol("k")
    data: Dict[int, int] = {0: 1}
    for factor in (1, 2, 3):
        data[factor] = len(lattice_points_in(dilate(vertices, factor), lattice))
    poly = sympy.interpolate(list(data.items()), k)
    for factor in range(4, k_max + 1):
        found = len(lattice_points_in(dilate(vertices, factor), lattice))
        if poly.subs(k, factor) != found:
            raise InternalError(
                f"Ehrhart cubic predicts {poly.subs(k, factor)} points at k={factor}, found {found}"
            )
    logger.debug(f"Ehrhart data {data} -> {poly}")
    return sympy.Poly(poly, k)


# ---------------------------------------------------------------------------
# Face triangulations in barycentric coordinates
# ---------------------------------------------------------------------------

Bary = Tuple[int, int, int]
FaceEdge = Tuple[Bary, Bary]


def _face_edge(a: Bary, b: Bary) -> FaceEdge:
    return (a, b) if a <= b else (b, a)


def standard_face_edges(k: int) -> frozenset:
    """Edges of the standard triangulation of k times a unimodular triangle.

    Points are barycentric triples (a, b, c) with a + b + c = k; edges join points whose
    difference is a permutation of (1, -1, 0).
    """
    if k < 1:
        raise DomainError(f"dilation factor must be positive, got {k}")
    edges = set()
    for a in range(k + 1):
        for b in range(k + 1 - a):
            pt = (a, b, k - a - b)
            for i, j in ((0, 1), (0, 2), (1, 2)):
                if pt[j] > 0:
                    other = list(pt)
                    other[i] += 1
                    other[j] -= 1
                    edges.add(_face_edge(pt, tuple(other)))
    return frozenset(edges)


def quasi_standard_flips(k: int) -> List[Tuple[FaceEdge, FaceEdge]]:
    """(old, new) diagonals of the six flips turning the standard face into the quasi-standard one.

    Each flipped edge has its midpoint at a permutation of (1/2, 5/2, k - 3).
    """
    if k < 7:
        raise DomainError(f"quasi-standard faces need k >= 7, got {k}")
    flips = []
    for i, j, l in ((0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 0, 1), (1, 2, 0), (2, 1, 0)):
        # doubled midpoint: 1 at i, 5 at j, 2(k - 3) at l
        twice = [0, 0, 0]
        twice[i], twice[j], twice[l] = 1, 5, 2 * (k - 3)

        def shifted(di: int, dj: int, dl: int) -> Bary:
            out = list(twice)
            out[i] += di
            out[j] += dj
            out[l] += dl
            return (out[0] // 2, out[1] // 2, out[2] // 2)

        old = _face_edge(shifted(1, -1, 0), shifted(-1, 1, 0))
        new = _face_edge(shifted(-1, -1, 2), shifted(1, 1, -2))
        flips.append((old, new))
    return flips


@lru_cache(maxsize=None)
def quasi_standard_face(k: int) -> frozenset:
    """Edge set of the quasi-standard triangulation of k times a unimodular triangle."""
    edges = set(standard_face_edges(k))
    for old, new in quasi_standard_flips(k):
        if old not in edges:
            raise InternalError(f"flip edge {old} is not a standard edge")
        edges.remove(old)
        edges.add(new)
    return frozenset(edges)


# ---------------------------------------------------------------------------
# Triangulations
# ---------------------------------------------------------------------------

Cell = Tuple[Point, Point, Point, Point]


@dataclass
class Triangulation:
    """Shared vertex list plus tetrahedra as sorted index 4-tuples."""

    vertices: List[Point]
    tetrahedra: List[Tuple[int, int, int, int]]
    lattice: AmbientLattice = field(default_factory=integer_lattice)
    boundary_style: str = "unconstrained"
    meta: Dict[str, object] = field(default_factory=dict)

    @classmethod
    def from_cells(
        cls,
        cells: Iterable[Sequence[Point]],
        lattice: Optional[AmbientLattice] = None,
        boundary_style: str = "unconstrained",
        meta: Optional[Dict[str, object]] = None,
    ) -> "Triangulation":
        cell_list = [tuple(sorted(tuple(int(c) for c in v) for v in cell)) for cell in cells]
        vertices = sorted({v for cell in cell_list for v in cell})
        index = {v: i for i, v in enumerate(vertices)}
        tetrahedra = sorted({tuple(index[v] for v in cell) for cell in cell_list})
        if len(tetrahedra) != len(cell_list):
            raise InternalError("duplicate cells in triangulation")
        return cls(
            vertices,
            tetrahedra,
            lattice or integer_lattice(),
            boundary_style,
            dict(meta or {}),
        )

    def cells(self) -> List[Cell]:
        v = self.vertices
        return [(v[a], v[b], v[c], v[d]) for a, b, c, d in self.tetrahedra]

    def mapped(self, f: "AffineLatticeMap", lattice: AmbientLattice) -> "Triangulation":
        return Triangulation.from_cells(
            [[f.apply(v) for v in cell] for cell in self.cells()],
            lattice,
            self.boundary_style,
            self.meta,
        )

    def to_json(self) -> Dict[str, object]:
        return {
            "lattice": self.lattice.to_json(),
            "vertices": [list(v) for v in self.vertices],
            "tetrahedra": [list(t) for t in self.tetrahedra],
            "boundary_style": self.boundary_style,
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, data: Dict[str, object]) -> "Triangulation":
        try:
            vertices = [tuple(int(c) for c in v) for v in data["vertices"]]
            tetrahedra = [tuple(int(i) for i in t) for t in data["tetrahedra"]]
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"malformed triangulation data: {e}") from e
        for t in tetrahedra:
            if len(t) != 4 or any(not 0 <= i < len(vertices) for i in t):
                raise DomainError(f"tetrahedron {t} has indices out of range")
        basis = data.get("lattice") or IDENTITY
        return cls(
            vertices,
            tetrahedra,
            AmbientLattice(basis),
            str(data.get("boundary_style", "unconstrained")),
            dict(data.get("meta") or {}),
        )
