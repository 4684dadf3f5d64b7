"""Unimodular triangulations of dilated empty lattice tetrahedra and lattice polytopes."""

__version__ = "0.1.0"

from .dilation import BoundaryStyle, DilationPlan, Method, dispatch, run_plan, triangulate
from .empty_simplex import EmptyClass, canonical_p, classify, tetragonal
from .lattice_core import (
    AmbientLattice,
    DomainError,
    InternalError,
    LatticeError,
    LatticeSimplex,
    Triangulation,
)
from .polytope_pipeline import LatticePolytope, triangulate_dilation
from .verifier import VerificationReport, verify_all, verify_complex

__all__ = [
    "AmbientLattice",
    "BoundaryStyle",
    "DilationPlan",
    "DomainError",
    "EmptyClass",
    "InternalError",
    "LatticeError",
    "LatticePolytope",
    "LatticeSimplex",
    "Method",
    "Triangulation",
    "VerificationReport",
    "canonical_p",
    "classify",
    "dispatch",
    "run_plan",
    "tetragonal",
    "triangulate",
    "triangulate_dilation",
    "verify_all",
    "verify_complex",
]
