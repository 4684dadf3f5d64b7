"""Test our unimodular triangulations of dilated right-angled tetrahedra."""

from unittest.mock import patch

import pytest

from unimodular_dilations.dilation import (
    BoundaryStyle,
    Method,
    dispatch,
    interface_checkerboard,
    quasi_interface_kinds,
    run_plan,
    sum_split,
    triangulate,
    triangulate_dissection,
    triangulate_nonstandard,
    triangulate_sum,
    triangulate_tetragonal_2,
    triangulate_tetragonal_cells,
)
from unimodular_dilations.lattice_core import (
    DomainError,
    Triangulation,
    right_angled_lattice,
    right_angled_vertices,
)
from unimodular_dilations.verifier import verify_all, verify_complex


def check(tri, q, k, style):
    report = verify_all(tri, right_angled_vertices(q), k, style)
    assert report.passed, report.counterexamples
    return report


class TestDispatch:
    """Test OUR choice of construction per (p, q, k, style)."""

    @pytest.mark.parametrize(
        "p,q,k,style,method",
        [
            (1, 5, 2, "standard", Method.TETRAGONAL_2),
            (4, 5, 3, "standard", Method.TETRAGONAL_K),
            (0, 1, 5, "standard", Method.TETRAGONAL_K),
            (2, 5, 4, "free", Method.NON_STANDARD_K),
            (2, 5, 4, "standard", Method.COMPOSITE),
            (2, 5, 9, "standard", Method.COMPOSITE),
            (2, 5, 13, "standard", Method.SUM),
            (2, 5, 7, "quasi", Method.QUASI_STANDARD_K),
        ],
    )
    def test_methods(self, p, q, k, style, method):
        assert dispatch(p, q, k, style).method == method

    def test_composite_uses_smallest_factor(self):
        plan = dispatch(2, 5, 9)
        assert (plan.k1, plan.k2) == (3, 3)

    @pytest.mark.parametrize(
        "k,message",
        [
            (1, "k=1 is impossible"),
            (2, "k=2 is impossible for a non-tetragonal class"),
            (3, "not provided by the known constructions"),
            (5, "not provided by the known constructions"),
            (7, "requires quasi-standard boundary"),
            (11, "requires quasi-standard boundary"),
        ],
    )
    def test_standard_obstructions(self, k, message):
        with pytest.raises(DomainError, match=message):
            dispatch(2, 5, k)

    def test_only_small_factors_are_called_impossible(self):
        """Test OUR messages claim impossibility only for k = 1 and k = 2."""
        for k in (3, 5, 7, 11):
            with pytest.raises(DomainError) as excinfo:
                dispatch(5, 13, k)
            assert "impossible" not in str(excinfo.value)
        with pytest.raises(DomainError, match="impossible"):
            dispatch(5, 13, 2)

    def test_other_errors(self):
        with pytest.raises(DomainError, match="k >= 7"):
            dispatch(2, 5, 6, "quasi-standard")
        with pytest.raises(DomainError, match="not unimodular"):
            dispatch(1, 5, 1)
        with pytest.raises(DomainError, match="k=3 with unconstrained boundary is not provided"):
            dispatch(2, 5, 3, "unconstrained")
        with pytest.raises(DomainError, match="k=2 is impossible"):
            dispatch(5, 13, 2, "unconstrained")
        with pytest.raises(DomainError, match="positive"):
            dispatch(2, 5, 0)
        with pytest.raises(DomainError, match="unknown boundary style"):
            BoundaryStyle.parse("round")

    def test_sum_split(self):
        assert sum_split(13) == (4, 9)
        assert sum_split(17) == (8, 9)
        assert sum_split(19) == (4, 15)
        assert sum_split(23) == (8, 15)
        with pytest.raises(DomainError):
            sum_split(11)


class TestTetragonal:
    """Test OUR constructions for p = +-1 (mod q)."""

    @pytest.mark.parametrize("q", [1, 2, 3, 5])
    def test_second_dilation(self, q):
        tri = triangulate_tetragonal_2(q)
        assert len(tri.tetrahedra) == 8 * q
        check(tri, q, 2, "standard")

    @pytest.mark.parametrize("p,q,k", [(1, 3, 3), (4, 5, 3), (1, 2, 4)])
    def test_layered(self, p, q, k):
        tri = triangulate(p, q, k)
        assert tri.meta["method"] == Method.TETRAGONAL_K.value
        assert len(tri.tetrahedra) == k**3 * q
        check(tri, q, k, "standard")

    def test_tetragonal_cells(self):
        tri = triangulate_tetragonal_cells(2, 5, 3)
        assert tri.meta["unimodular"] is False
        report = verify_all(tri, right_angled_vertices(5), 3, "standard", unimodular=False)
        assert report.passed, report.counterexamples


class TestNonTetragonal:
    """Test OUR constructions for classes without compatible maximal paths."""

    def test_nonstandard_k4(self):
        tri = triangulate_nonstandard(2, 5, 4)
        assert len(tri.tetrahedra) == 4**3 * 5
        report = check(tri, 5, 4, "unconstrained")
        assert report.counts["boundary[unconstrained].non_standard_edges"] <= 4

    def test_interface_height_range(self):
        with pytest.raises(DomainError, match="interface height"):
            triangulate_nonstandard(2, 5, 5, c=1)
        grid = interface_checkerboard(5, 2)
        assert grid[(0, 0)] != grid[(0, 1)]
        assert len(grid) == 3 * 2

    def test_composite_k4(self):
        tri = run_plan(dispatch(2, 5, 4))
        assert tri.meta["method"] == Method.COMPOSITE.value
        assert tri.boundary_style == "standard"
        check(tri, 5, 4, "standard")

    @pytest.mark.slow
    def test_quasi_standard_k7(self):
        tri = triangulate(2, 5, 7, "quasi-standard")
        report = check(tri, 5, 7, "quasi-standard")
        assert report.checks["boundary[quasi-standard].quasi_standard"]

    def test_quasi_interface_rows(self):
        kinds = quasi_interface_kinds(7)
        assert [kinds[(a, 0)] for a in range(4)] == ["X", "Y", "Y", "X"]
        assert [kinds[(a, 1)] for a in range(4)] == ["Y", "X", "X", "Y"]

    @pytest.mark.slow
    def test_sum_k13(self):
        tri = triangulate(2, 5, 13)
        assert tri.meta["method"] == Method.SUM.value
        assert len(tri.tetrahedra) == 13**3 * 5
        check(tri, 5, 13, "standard")

    def test_dissection_faces_only_fail(self):
        tri = triangulate_dissection(2, 5, 3)
        assert tri.meta["dissection"] is True
        region = [tuple(3 * c for c in v) for v in right_angled_vertices(5)]
        report = verify_complex(tri, region)
        assert report.checks["volume_budget"]
        assert report.checks["positive_volume"]
        assert report.checks["vertices_in_region"]


class TestGivenSummands:
    """Test OUR sums built from caller-supplied standard triangulations."""

    def test_given_summands_match_built_ones(self):
        half = triangulate_tetragonal_2(3)
        given = triangulate_sum(1, 3, 2, 2, sub1=half, sub2=half)
        built = triangulate_sum(1, 3, 2, 2)
        assert given.cells() == built.cells()
        assert len(given.tetrahedra) == 4**3 * 3
        check(given, 3, 4, "standard")

    def test_rejects_non_unimodular_summand(self):
        corner = [tuple(2 * c for c in v) for v in right_angled_vertices(3)]
        coarse = Triangulation.from_cells([corner], right_angled_lattice(1, 3))
        with pytest.raises(DomainError, match="not unimodular"):
            triangulate_sum(1, 3, 2, 2, sub1=coarse)

    def test_rejects_summand_of_wrong_size(self):
        half = triangulate_tetragonal_2(3)
        with pytest.raises(DomainError, match="covers volume 24, expected 81"):
            triangulate_sum(1, 3, 3, 2, sub1=half)
        with pytest.raises(DomainError, match="outside"):
            triangulate_sum(1, 3, 2, 1, sub2=half)

    def test_rejects_non_standard_summand(self):
        half = triangulate_tetragonal_2(3)
        with patch("unimodular_dilations.dilation.standard_directions", return_value=set()):
            with pytest.raises(DomainError, match="not standard"):
                triangulate_sum(1, 3, 2, 2, sub1=half)
