"""Test resources functionality."""

import json
from unittest.mock import Mock

import pytest

from unimodular_dilations.resources import resources_manager


def test_list_resources():
    """Test listing resources."""
    resource_uris = [str(r.uri) for r in resources_manager.list_resources()]
    assert "dilations://obstructions" in resource_uris

    template_uris = [str(t.uriTemplate) for t in resources_manager.list_resource_templates()]
    assert "dilations://class/{p}/{q}" in template_uris


@pytest.mark.asyncio
async def test_obstructions():
    """Test the obstruction table resource."""
    content = await resources_manager.read_resource("dilations://obstructions", Mock())
    data = json.loads(content)
    assert data["standard"]["excluded_k"] == [1, 2, 3, 5, 7, 11]
    assert data["gluable"]["excluded_k"] == [1, 2, 3, 5]
    assert data["quasi-standard"]["excluded_k"] == [1, 2, 3, 4, 5, 6]
    assert data["unconstrained"]["excluded_k"] == [1, 2, 3]
    assert data["standard"]["impossible_k"] == [1, 2]
    assert data["standard"]["not_constructed_k"] == [3, 5, 7, 11]
    assert data["gluable"]["open_k"] == [3, 5]
    assert data["unconstrained"]["not_constructed_k"] == [3]


@pytest.mark.asyncio
async def test_class_summary():
    """Test the per-class resource for a non-tetragonal class."""
    content = await resources_manager.read_resource("dilations://class/2/5", Mock())
    data = json.loads(content)
    assert data["paths_compatible"] is False
    assert data["point_counts"]["2"] == 5 + 9
    admissible = data["admissible_k"]
    assert admissible["standard"][:3] == [4, 6, 8]
    assert 7 not in admissible["standard"]
    assert admissible["quasi-standard"][0] == 7
    assert admissible["unconstrained"][0] == 4


@pytest.mark.asyncio
async def test_tetragonal_class_summary():
    content = await resources_manager.read_resource("dilations://class/1/3", Mock())
    data = json.loads(content)
    assert data["paths_compatible"] is True
    assert data["admissible_k"]["standard"][:2] == [2, 3]


@pytest.mark.asyncio
async def test_invalid_class():
    with pytest.raises(ValueError, match="Invalid white parameters"):
        await resources_manager.read_resource("dilations://class/2/4", Mock())


@pytest.mark.asyncio
async def test_unknown_resource():
    with pytest.raises(ValueError, match="Unknown resource"):
        await resources_manager.read_resource("dilations://nothing", Mock())


@pytest.mark.asyncio
async def test_resource_caching():
    """Test that resources are cached."""
    uri = "dilations://obstructions"
    resources_manager.cache.pop(uri, None)
    first = await resources_manager.read_resource(uri, Mock())
    assert uri in resources_manager.cache
    assert await resources_manager.read_resource(uri, Mock()) is first
