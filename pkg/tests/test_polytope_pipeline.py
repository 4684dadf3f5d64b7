"""Test our polytope pipeline: placing triangulation, dilation and gluing."""

import pytest

from tests.conftest import kuhn_cells
from unimodular_dilations.empty_simplex import white_vertices
from unimodular_dilations.lattice_core import (
    DomainError,
    dilate,
    integer_lattice,
    right_angled_lattice,
    right_angled_vertices,
    standard_face_edges,
)
from unimodular_dilations.polytope_pipeline import (
    LatticePolytope,
    initial_empty_triangulation,
    shared_face_contract,
    triangulate_dilation,
)
from unimodular_dilations.verifier import verify_complex, verify_unimodular


def assert_unimodular_triangulation(tri, vertices, k):
    report = verify_complex(tri, dilate(vertices, k), require_all_points=True)
    report = report.merge(verify_unimodular(tri))
    assert report.passed, report.counterexamples


class TestPlacing:
    """Test OUR initial triangulation into empty tetrahedra."""

    def test_cube_volume(self, unit_cube):
        complex_ = initial_empty_triangulation(LatticePolytope(tuple(unit_cube)))
        assert sum(cls.q for cls in complex_.classes) == 6
        assert sorted({v for cell in complex_.cells() for v in cell}) == sorted(unit_cube)

    def test_reeve_is_one_cell(self, reeve_tetrahedron):
        complex_ = initial_empty_triangulation(LatticePolytope(tuple(reeve_tetrahedron)))
        assert len(complex_.tetrahedra) == 1
        assert complex_.classes[0].q == 3

    def test_flat_polytope_rejected(self):
        with pytest.raises(DomainError, match="full-dimensional"):
            LatticePolytope(((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)))

    def test_vertex_off_lattice_rejected(self):
        with pytest.raises(DomainError, match="not a lattice point"):
            LatticePolytope(tuple(white_vertices(0, 1)), right_angled_lattice(2, 5))

    def test_from_json(self):
        unit = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
        polytope = LatticePolytope.from_json({"vertices": unit})
        assert polytope.lattice == integer_lattice()
        with pytest.raises(DomainError, match="malformed"):
            LatticePolytope.from_json({"points": []})


class TestDilation:
    """Test OUR unimodular triangulations of kP."""

    def test_cube(self, unit_cube):
        tri = triangulate_dilation(LatticePolytope(tuple(unit_cube)), 4)
        assert len(tri.tetrahedra) == 4**3 * 6
        assert tri.meta["method"] == "Pipeline"
        assert_unimodular_triangulation(tri, unit_cube, 4)

    def test_reeve(self, reeve_tetrahedron):
        tri = triangulate_dilation(LatticePolytope(tuple(reeve_tetrahedron)), 4)
        assert len(tri.tetrahedra) == 192
        assert_unimodular_triangulation(tri, reeve_tetrahedron, 4)

    def test_non_tetragonal_cell(self):
        vertices = white_vertices(2, 5)
        tri = triangulate_dilation(LatticePolytope(tuple(vertices)), 4)
        assert [q for _, q in tri.meta["classes"]] == [5]
        assert len(tri.tetrahedra) == 320
        assert_unimodular_triangulation(tri, vertices, 4)

    def test_custom_lattice(self):
        lattice = right_angled_lattice(2, 5)
        vertices = right_angled_vertices(5)
        tri = triangulate_dilation(LatticePolytope(tuple(vertices), lattice), 4)
        assert tri.lattice == lattice
        assert len(tri.tetrahedra) == 320
        assert verify_unimodular(tri).passed

    def test_unconstrained_gluing_rejected(self, unit_cube):
        with pytest.raises(DomainError, match="gluing"):
            triangulate_dilation(LatticePolytope(tuple(unit_cube)), 4, "unconstrained")

    def test_obstructed_cell(self):
        with pytest.raises(DomainError, match=r"cell of class \(\d,5\)"):
            triangulate_dilation(LatticePolytope(tuple(white_vertices(2, 5))), 3)

    def test_dissection(self):
        vertices = white_vertices(2, 5)
        tri = triangulate_dilation(LatticePolytope(tuple(vertices)), 3, dissection_mode=True)
        assert tri.meta["dissection"] is True
        assert tri.boundary_style == "unconstrained"
        report = verify_complex(tri, dilate(vertices, 3))
        assert report.checks["volume_budget"]
        assert verify_unimodular(tri).passed


class TestSharedFaces:
    """Test OUR face contracts between neighbouring cells."""

    def test_contract_is_symmetric(self):
        a, b = kuhn_cells()[:2]
        forward = shared_face_contract(a, b, 4, "standard")
        assert forward == shared_face_contract(b, a, 4, "standard")
        assert len(forward) == len(standard_face_edges(4))

    def test_cells_must_share_a_triangle(self):
        a = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
        b = [(5, 5, 5), (6, 5, 5), (5, 6, 5), (5, 5, 6)]
        with pytest.raises(DomainError, match="share a triangle"):
            shared_face_contract(a, b, 2, "standard")
