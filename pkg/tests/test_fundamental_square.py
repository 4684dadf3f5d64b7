"""Test our fundamental-square combinatorics."""

from math import gcd

import pytest

from unimodular_dilations.fundamental_square import (
    KIND_PAIR,
    KIND_X,
    KIND_Y,
    X_AXIS,
    Y_AXIS,
    MonotonePath,
    compatible_quasi_maximal_pair,
    complete_square_triangulation,
    crossing_obstruction,
    improper_intersection,
    interior_points,
    is_quasi_maximal,
    latitude_direction,
    longitude_direction,
    maximal_path,
    orient2,
    paths_compatible,
    square_context,
    square_triangulation,
    strip_fan_triangulation,
)
from unimodular_dilations.lattice_core import DomainError


def classes(q_max):
    for q in range(2, q_max + 1):
        for p in range(1, q):
            if gcd(p, q) == 1:
                yield p, q


def doubled_area(tri):
    a, b, c = tri
    return abs(orient2(a, b, c))


def test_interior_points_of_5_13():
    """Test OUR interior point pattern for p = 5, q = 13."""
    expected = [
        (8, 1), (3, 2), (11, 3), (6, 4), (1, 5), (9, 6),
        (4, 7), (12, 8), (7, 9), (2, 10), (10, 11), (5, 12),
    ]  # fmt: skip
    assert interior_points(square_context(5, 13)) == expected


def test_maximal_paths_visit_every_interior_point():
    ctx = square_context(5, 13)
    for axis in (X_AXIS, Y_AXIS):
        path = maximal_path(ctx, axis)
        assert sorted(path.points) == sorted(interior_points(ctx))
        assert is_quasi_maximal(ctx, path)


def test_bad_context_rejected():
    with pytest.raises(DomainError, match="gcd"):
        square_context(2, 4)
    with pytest.raises(DomainError, match="positive"):
        square_context(1, 0)


@pytest.mark.parametrize("p,q", list(classes(20)))
def test_compatible_iff_tetragonal(p, q):
    """Test OUR k = 2 dichotomy: compatible maximal paths exactly for p = +-1."""
    ctx = square_context(p, q)
    tetragonal = p in (1, q - 1)
    assert paths_compatible(ctx) is tetragonal
    assert (crossing_obstruction(ctx) is None) is tetragonal


def test_obstruction_edges_cross():
    ctx = square_context(2, 5)
    a, b, c, d = crossing_obstruction(ctx)
    assert improper_intersection((a, b), (c, d))
    assert (a, b) in maximal_path(ctx, Y_AXIS).edges()
    assert (c, d) in maximal_path(ctx, X_AXIS).edges()


@pytest.mark.parametrize("p,q", [(2, 5), (3, 7), (2, 9), (5, 13)])
def test_quasi_maximal_pair_is_compatible(p, q):
    ctx = square_context(p, q)
    x_path, y_path = compatible_quasi_maximal_pair(ctx)
    assert is_quasi_maximal(ctx, x_path)
    assert is_quasi_maximal(ctx, y_path)
    for e in y_path.edges():
        for f in x_path.edges():
            assert not improper_intersection(e, f)


class TestSquareTriangulations:
    """Test OUR constrained square triangulations."""

    @pytest.mark.parametrize("p,q", [(1, 2), (1, 3), (2, 5), (3, 7), (5, 13)])
    @pytest.mark.parametrize("kind", [KIND_X, KIND_Y, KIND_PAIR])
    def test_unimodular_and_complete(self, p, q, kind):
        ctx = square_context(p, q)
        tri = square_triangulation(ctx, kind)
        assert len(tri.points) == q + 3
        assert len(tri.triangles) == 2 * q
        # normalized area q in the plane lattice of covolume q
        assert all(doubled_area(t) == q for t in tri.triangles)

    @pytest.mark.parametrize("kind,axis", [(KIND_X, X_AXIS), (KIND_Y, Y_AXIS)])
    def test_forced_path_present(self, kind, axis):
        ctx = square_context(2, 5)
        tri = square_triangulation(ctx, kind)
        assert set(maximal_path(ctx, axis).edges()) <= tri.edges()

    def test_unknown_kind(self):
        with pytest.raises(DomainError, match="unknown square kind"):
            square_triangulation(square_context(2, 5), "Z")

    @pytest.mark.parametrize("q,r,squares", [(5, 3, 1), (5, 3, 3), (7, 4, 2)])
    def test_fan_strip(self, q, r, squares):
        tri = strip_fan_triangulation(q, r, squares, 0)
        assert len(tri.triangles) == 2 * q * squares
        assert all(doubled_area(t) == q for t in tri.triangles)
        corners = [(i * q, 0) for i in range(squares + 1)]
        first = (r % q, 1)
        for corner in corners:
            assert tuple(sorted((corner, first))) in tri.edges()


class TestLatitudes:
    """Test OUR latitude and longitude directions."""

    @pytest.mark.parametrize(
        "p,q,latitude,longitude",
        [
            (4, 17, (-4, 1), (1, 4)),
            (5, 17, (-5, 1), (1, -7)),
            (12, 13, (1, 1), (1, 1)),
        ],
    )
    def test_directions(self, p, q, latitude, longitude):
        ctx = square_context(p, q)
        assert latitude_direction(ctx) == latitude
        assert longitude_direction(ctx) == longitude

    def test_directions_are_lattice_vectors(self):
        for p, q in classes(17):
            ctx = square_context(p, q)
            du, dv = latitude_direction(ctx)
            assert (du - ctx.p_prime * dv) % q == 0
            du, dv = longitude_direction(ctx)
            assert (du - ctx.p_prime * dv) % q == 0


class TestQuasiMaximal:
    """Test OUR quasi-maximal predicate on hand-built paths of (5, 13)."""

    def test_skip_to_adjacent_latitude(self):
        ctx = square_context(5, 13)
        points = [pt for pt in interior_points(ctx) if pt != (3, 2)]
        assert is_quasi_maximal(ctx, MonotonePath(Y_AXIS, tuple(points)))

    def test_skip_across_two_latitudes(self):
        ctx = square_context(5, 13)
        points = [pt for pt in interior_points(ctx) if not 2 <= pt[1] <= 5]
        assert points[:2] == [(8, 1), (9, 6)]
        assert not is_quasi_maximal(ctx, MonotonePath(Y_AXIS, tuple(points)))

    def test_endpoints_and_membership(self):
        ctx = square_context(5, 13)
        full = interior_points(ctx)
        assert not is_quasi_maximal(ctx, MonotonePath(Y_AXIS, tuple(full[1:])))
        assert not is_quasi_maximal(ctx, MonotonePath(Y_AXIS, tuple(full[:-1])))
        assert not is_quasi_maximal(ctx, MonotonePath(Y_AXIS, ((0, 1),) + tuple(full[1:])))
        assert not is_quasi_maximal(ctx, MonotonePath(Y_AXIS, tuple(reversed(full))))
        assert not is_quasi_maximal(ctx, MonotonePath(Y_AXIS, ()))


class TestCompleteSquare:
    """Test OUR greedy completion of forced edges to a square triangulation."""

    def check_complete(self, ctx, tri, forced):
        assert len(tri.points) == ctx.q + 3
        assert len(tri.triangles) == 2 * ctx.q
        assert all(doubled_area(t) == ctx.q for t in tri.triangles)
        assert set(forced) <= tri.edges()

    def test_both_paths_of_tetragonal_class(self):
        ctx = square_context(1, 7)
        forced = sorted(
            set(maximal_path(ctx, X_AXIS).edges()) | set(maximal_path(ctx, Y_AXIS).edges())
        )
        tri = complete_square_triangulation(ctx, forced)
        self.check_complete(ctx, tri, forced)

    def test_single_maximal_path(self):
        ctx = square_context(2, 5)
        forced = maximal_path(ctx, Y_AXIS).edges()
        self.check_complete(ctx, complete_square_triangulation(ctx, forced), forced)

    def test_quasi_maximal_pair(self):
        ctx = square_context(5, 13)
        x_path, y_path = compatible_quasi_maximal_pair(ctx)
        forced = sorted(set(x_path.edges()) | set(y_path.edges()))
        self.check_complete(ctx, complete_square_triangulation(ctx, forced), forced)

    def test_crossing_forced_edges_rejected(self):
        ctx = square_context(2, 5)
        a, b, c, d = crossing_obstruction(ctx)
        with pytest.raises(DomainError, match="intersect improperly"):
            complete_square_triangulation(ctx, [(a, b), (c, d)])
