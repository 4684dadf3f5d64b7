"""Test our classification of empty lattice tetrahedra."""

from math import gcd

import pytest

from unimodular_dilations.empty_simplex import (
    canonical_p,
    classify,
    is_empty,
    is_tetragonal,
    lattice_width,
    tetragonal,
    to_right_angled,
    white_simplex,
    white_vertices,
    width_one_pairs,
)
from unimodular_dilations.lattice_core import (
    AffineLatticeMap,
    DomainError,
    LatticeSimplex,
    normalized_volume,
    right_angled_vertices,
)

SHEAR = AffineLatticeMap(((1, 1, 0), (0, 1, 1), (0, 0, 1)), (3, -2, 5))


def coprime_pairs(q_max):
    for q in range(2, q_max + 1):
        for p in range(1, q):
            if gcd(p, q) == 1:
                yield p, q


class TestClassify:
    """Test OUR white-parameter classification."""

    def test_classify_5_13(self):
        cls = classify(white_simplex(5, 13))
        assert cls.q == 13
        assert cls.p in (5, 8)
        assert cls.canonical_p == 5
        assert not is_tetragonal(cls)

    def test_reeve_is_tetragonal(self, reeve_tetrahedron):
        simplex = LatticeSimplex(tuple(reeve_tetrahedron))
        cls = classify(simplex)
        assert cls.q == 3
        assert is_tetragonal(cls)

    def test_unimodular_simplex(self):
        cls = classify(white_simplex(0, 1))
        assert cls.q == 1
        assert cls.canonical_p == 0

    @pytest.mark.parametrize("p,q", [(2, 5), (3, 7), (5, 13)])
    def test_classify_after_unimodular_change(self, p, q):
        moved = LatticeSimplex(tuple(SHEAR.apply(v) for v in white_vertices(p, q)))
        cls = classify(moved)
        assert cls.q == q
        assert cls.canonical_p == canonical_p(p, q)
        images = sorted(cls.to_canonical.apply(v) for v in moved.vertices)
        assert images == sorted(white_vertices(cls.p, cls.q))

    @pytest.mark.parametrize("p,q", [(1, 5), (4, 5), (1, 7)])
    def test_tetragonal_ties_take_lowest_pair(self, p, q):
        for simplex in (
            white_simplex(p, q),
            LatticeSimplex(tuple(SHEAR.apply(v) for v in white_vertices(p, q))),
        ):
            pairs = width_one_pairs(simplex)
            assert len(pairs) == 2
            cls = classify(simplex)
            assert cls.pair == min(pairs)
            assert sorted(cls.to_canonical.apply(v) for v in simplex.vertices) == sorted(
                white_vertices(cls.p, cls.q)
            )

    def test_non_empty_rejected(self):
        big = LatticeSimplex(((0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2)))
        assert not is_empty(big)
        with pytest.raises(DomainError, match="not empty"):
            classify(big)

    def test_right_angled_model(self):
        simplex, f = to_right_angled(classify(white_simplex(2, 5)))
        assert sorted(simplex.vertices) == sorted(right_angled_vertices(5))
        assert normalized_volume(simplex) == 5
        assert sorted(f.apply(v) for v in white_vertices(2, 5)) == sorted(simplex.vertices)


class TestWidthAndOrbits:
    """Test OUR width computations and canonical representatives."""

    @pytest.mark.parametrize("p,q", list(coprime_pairs(12)))
    def test_white_simplices_have_width_one(self, p, q):
        simplex = white_simplex(p, q)
        assert is_empty(simplex)
        assert width_one_pairs(simplex)
        result = lattice_width(simplex.vertices, search_bound=2)
        assert result.width == 1

    @pytest.mark.parametrize("p,q", [(1, 2), (2, 5), (3, 7), (5, 12)])
    def test_default_search_bound_follows_q(self, p, q, caplog):
        simplex = white_simplex(p, q)
        result = lattice_width(simplex.vertices)
        assert result.width == 1
        assert result.certified
        assert "not certified" not in caplog.text

    def test_default_search_bound_on_dilations(self):
        dilated = [tuple(3 * c for c in v) for v in white_vertices(2, 5)]
        result = lattice_width(dilated)
        assert result.width == 3
        assert result.certified

    @pytest.mark.parametrize("p,q", list(coprime_pairs(30)))
    def test_canonical_p_is_constant_on_orbits(self, p, q):
        inverse = pow(p, -1, q)
        orbit = {p, q - p, inverse, q - inverse}
        assert {canonical_p(r, q) for r in orbit} == {canonical_p(p, q)}

    @pytest.mark.parametrize(
        "p,q,expected",
        [(1, 2, True), (1, 5, True), (4, 5, True), (2, 5, False), (3, 8, False), (2, 7, False)],
    )
    def test_tetragonal(self, p, q, expected):
        assert tetragonal(p, q) is expected
