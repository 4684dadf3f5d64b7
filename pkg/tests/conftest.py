"""Shared fixtures: small complexes, negative controls and polytopes."""

import json
import os
from itertools import permutations
from unittest.mock import patch

import pytest

from unimodular_dilations.config import DilationConfigManager
from unimodular_dilations.lattice_core import Triangulation


def kuhn_cells(origin=(0, 0, 0), size=1):
    """The six path simplices of a lattice cube."""
    cells = []
    for order in permutations(range(3)):
        v = list(origin)
        cell = [tuple(v)]
        for axis in order:
            v[axis] += size
            cell.append(tuple(v))
        cells.append(cell)
    return cells


@pytest.fixture
def unit_cube():
    return [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]


@pytest.fixture
def reeve_tetrahedron():
    return [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 3)]


@pytest.fixture
def cube_triangulation():
    return Triangulation.from_cells(kuhn_cells())


@pytest.fixture
def overlapping_triangulation():
    """Negative control: a unit tetrahedron inside its own 2-dilate."""
    big = [(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2)]
    small = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    return Triangulation.from_cells([big, small])


@pytest.fixture
def gap_triangulation():
    """Negative control: five of the six cube simplices."""
    return Triangulation.from_cells(kuhn_cells()[:5])


@pytest.fixture
def clean_env():
    with patch.dict(os.environ, {}, clear=True):
        yield


@pytest.fixture
def manager(clean_env, tmp_path):
    """Config manager writing into a temporary directory."""
    with patch.dict(os.environ, {"DILATIONS_OUTPUT_DIR": str(tmp_path)}):
        m = DilationConfigManager()
        m._load_config()
        yield m


@pytest.fixture
def write_json(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return write
