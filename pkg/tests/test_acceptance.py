"""Test our constructions over whole grids of classes and dilation factors.

The default run uses reduced grids; the full grids carry the ``slow`` marker.
"""

from math import gcd

import pytest

from unimodular_dilations.dilation import (
    Method,
    dispatch,
    triangulate,
    triangulate_nonstandard,
    triangulate_quasi_standard,
    triangulate_tetragonal_2,
    triangulate_tetragonal_cells,
)
from unimodular_dilations.empty_simplex import classify, right_angled_map, tetragonal
from unimodular_dilations.fundamental_square import paths_compatible, square_context
from unimodular_dilations.lattice_core import (
    LatticeSimplex,
    dilate,
    dilated_point_count,
    integer_lattice,
    lattice_points_in,
    right_angled_lattice,
    right_angled_vertices,
)
from unimodular_dilations.polytope_pipeline import LatticePolytope, triangulate_dilation
from unimodular_dilations.tools.survey import auto_style
from unimodular_dilations.verifier import verify_all, verify_complex, verify_unimodular

SIX_VERTEX_POLYTOPE = [(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2), (2, 2, 1), (1, 2, 2)]


def classes(q_max, q_min=2):
    return [(p, q) for q in range(q_min, q_max + 1) for p in range(1, q) if gcd(p, q) == 1]


def reeve(r):
    return [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, r)]


def assert_passes(report):
    assert report.passed, report.counterexamples


@pytest.mark.parametrize("q", range(2, 51))
def test_k2_dichotomy(q):
    """Test OUR k = 2 rule: compatible paths exactly for tetragonal classes."""
    for p, _ in classes(q, q):
        assert paths_compatible(square_context(p, q)) is (p in (1, q - 1))
    assert dilated_point_count(q, 2) == q + 9


@pytest.mark.parametrize("q", [2, 3, 7, 13])
def test_tetragonal_second_dilation(q):
    tri = triangulate_tetragonal_2(q)
    assert len(tri.tetrahedra) == 8 * q
    assert_passes(verify_all(tri, right_angled_vertices(q), 2, "standard"))


@pytest.mark.parametrize("p,q", [(1, 2), (2, 5), (5, 13)])
@pytest.mark.parametrize("k", [1, 3, 5, 8])
def test_point_count_formula(p, q, k):
    region = dilate(right_angled_vertices(q), k)
    assert len(lattice_points_in(region, right_angled_lattice(p, q))) == dilated_point_count(q, k)


def _nonstandard_case(p, q, k):
    tri = triangulate_nonstandard(p, q, k)
    assert len(tri.tetrahedra) == k**3 * q
    report = verify_all(tri, right_angled_vertices(q), k, "unconstrained")
    assert_passes(report)
    assert report.counts["boundary[unconstrained].non_standard_edges"] <= 4


@pytest.mark.parametrize("p,q,k", [(2, 5, 5), (3, 7, 6), (2, 7, 4)])
def test_nonstandard_grid_sample(p, q, k):
    _nonstandard_case(p, q, k)


@pytest.mark.slow
@pytest.mark.parametrize("p,q", classes(13))
def test_nonstandard_grid(p, q):
    for k in range(4, 11):
        _nonstandard_case(p, q, k)


def _standard_case(p, q, k):
    tri = triangulate(p, q, k, "standard")
    assert len(tri.tetrahedra) == k**3 * q
    assert_passes(verify_all(tri, right_angled_vertices(q), k, "standard"))


@pytest.mark.parametrize("p,q,k", [(2, 5, 6), (3, 7, 4), (3, 8, 4)])
def test_standard_grid_sample(p, q, k):
    _standard_case(p, q, k)


@pytest.mark.slow
@pytest.mark.parametrize("p,q", classes(13))
@pytest.mark.parametrize("k", [4, 6, 8, 9, 10, 12, 13, 17, 19, 23])
def test_standard_grid(p, q, k):
    _standard_case(p, q, k)


@pytest.mark.slow
@pytest.mark.parametrize("k,split", [(13, (4, 9)), (17, (8, 9)), (19, (4, 15)), (23, (8, 15))])
def test_prime_sums(k, split):
    """Test OUR sums of composite factors for the primes above 11."""
    plan = dispatch(2, 5, k)
    assert plan.method == Method.SUM
    assert (plan.k1, plan.k2) == split
    _standard_case(2, 5, k)


@pytest.mark.slow
@pytest.mark.parametrize("p,q", classes(13))
@pytest.mark.parametrize("k", [7, 11])
def test_quasi_standard_grid(p, q, k):
    tri = triangulate_quasi_standard(p, q, k)
    report = verify_all(tri, right_angled_vertices(q), k, "quasi-standard")
    assert_passes(report)


def _tetragonal_cells_case(p, q, k):
    tri = triangulate_tetragonal_cells(p, q, k)
    back = right_angled_map(p, q).inverse()
    for cell in tri.cells():
        cls = classify(LatticeSimplex(tuple(back.apply(v) for v in cell), integer_lattice()))
        assert tetragonal(cls.p, cls.q)
    report = verify_all(tri, right_angled_vertices(q), k, "standard", unimodular=False)
    assert_passes(report)


@pytest.mark.parametrize("p,q,k", [(2, 5, 2), (3, 7, 3), (1, 4, 2), (2, 5, 4)])
def test_tetragonal_cells_sample(p, q, k):
    _tetragonal_cells_case(p, q, k)


@pytest.mark.slow
@pytest.mark.parametrize("p,q", classes(13))
@pytest.mark.parametrize("k", [2, 3, 4])
def test_tetragonal_cells_grid(p, q, k):
    _tetragonal_cells_case(p, q, k)


def _pipeline_case(vertices, k):
    polytope = LatticePolytope(tuple(vertices))
    tri = triangulate_dilation(polytope, k, auto_style(k))
    region = dilate(vertices, k)
    report = verify_complex(tri, region, require_all_points=True)
    assert_passes(report.merge(verify_unimodular(tri)))
    assert report.counts["volume"] == report.counts["region_volume"]


@pytest.mark.parametrize("r", [2, 3])
def test_reeve_pipeline_sample(r):
    _pipeline_case(reeve(r), 4)


@pytest.mark.slow
@pytest.mark.parametrize("k", [4, 6, 7, 8, 9, 11, 12])
@pytest.mark.parametrize(
    "name",
    ["cube", "reeve2", "reeve3", "reeve4", "reeve5", "six"],
)
def test_pipeline_grid(name, k, unit_cube):
    vertices = {
        "cube": unit_cube,
        "six": SIX_VERTEX_POLYTOPE,
        **{f"reeve{r}": reeve(r) for r in range(2, 6)},
    }[name]
    _pipeline_case(vertices, k)
