"""Read-only MCP resources: obstruction table and per-class summaries."""

import json
import re
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import mcp.types as types

from .config import DilationConfigManager
from .dilation import OBSTRUCTED_ANY, OBSTRUCTED_STANDARD, BoundaryStyle, dispatch
from .lattice_core import DomainError, dilated_point_count
from .tools.classification import describe_square
from .tools.utils import validate_pq

SURVEYED_FACTORS = range(1, 17)


@dataclass
class ResourceDefinition:
    """Simple resource definition."""

    uri_pattern: str
    name: str
    description: str
    mime_type: str
    handler: Callable
    cache_duration: int = 3600


class ResourcesManager:
    """Manages MCP resources with simple caching."""

    def __init__(self):
        self.resources: List[ResourceDefinition] = []
        self.cache: Dict[str, Tuple[str, float]] = {}

    def register(self, resource: ResourceDefinition) -> None:
        self.resources.append(resource)

    def list_resources(self) -> List[types.Resource]:
        """List static resources."""
        return [
            types.Resource(
                uri=r.uri_pattern,
                name=r.name,
                description=r.description,
                mimeType=r.mime_type,
            )
            for r in self.resources
            if "{" not in r.uri_pattern
        ]

    def list_resource_templates(self) -> List[types.ResourceTemplate]:
        """List dynamic resource templates."""
        return [
            types.ResourceTemplate(
                uriTemplate=r.uri_pattern,
                name=r.name,
                description=r.description,
                mimeType=r.mime_type,
            )
            for r in self.resources
            if "{" in r.uri_pattern
        ]

    async def read_resource(self, uri: str, manager: DilationConfigManager) -> str:
        """Read resource with caching."""
        if uri in self.cache:
            content, cached_at = self.cache[uri]
            resource = self._find_resource(uri)
            if resource and (time.time() - cached_at) < resource.cache_duration:
                return content

        resource = self._find_resource(uri)
        if not resource:
            raise ValueError(f"Unknown resource: {uri}")

        content = await resource.handler(uri, manager)
        self.cache[uri] = (content, time.time())
        return content

    def _find_resource(self, uri: str) -> Optional[ResourceDefinition]:
        for resource in self.resources:
            pattern = resource.uri_pattern
            pattern = pattern.replace("{", "(?P<").replace("}", ">[^/]+)")
            if re.match(f"^{pattern}$", uri):
                return resource
        return None


# Global resources manager
resources_manager = ResourcesManager()


async def obstructions_handler(uri: str, manager: DilationConfigManager) -> str:
    """Dilation factors excluded per boundary style, and the k = 2 rule."""
    return json.dumps(
        {
            "standard": {
                "excluded_k": list(OBSTRUCTED_STANDARD),
                "impossible_k": [1, 2],
                "not_constructed_k": [3, 5, 7, 11],
                "note": "composite k >= 4 and prime k >= 13 have standard boundary",
            },
            "quasi-standard": {
                "excluded_k": list(range(1, 7)),
                "note": "built for every k >= 7",
            },
            "gluable": {
                "excluded_k": list(OBSTRUCTED_ANY),
                "impossible_k": [1, 2],
                "open_k": [3, 5],
                "note": "standard or quasi-standard boundary exists for every other k; k = 3 and k = 5 are open",
            },
            "unconstrained": {
                "excluded_k": [1, 2, 3],
                "impossible_k": [1, 2],
                "not_constructed_k": [3],
                "note": "k >= 4 for every class; at most four non-standard boundary edges",
            },
            "tetragonal": {
                "rule": "p = +-1 (mod q)",
                "note": "tetragonal classes have unimodular triangulations for every k >= 2",
            },
        },
        indent=2,
    )


def _admissible(p: int, q: int, style: BoundaryStyle) -> List[int]:
    out = []
    for k in SURVEYED_FACTORS:
        try:
            dispatch(p, q, k, style)
        except DomainError:
            continue
        out.append(k)
    return out


async def class_summary_handler(uri: str, manager: DilationConfigManager) -> str:
    """Square data and admissible dilation factors for one class."""
    match = re.match(r"dilations://class/(-?\d+)/(\d+)$", uri)
    if not match:
        raise ValueError(f"Malformed class URI: {uri}")
    p, q = int(match.group(1)), int(match.group(2))
    if not validate_pq(p, q):
        raise ValueError(f"Invalid white parameters: p={p}, q={q}")

    summary = describe_square(p, q)
    summary["point_counts"] = {k: dilated_point_count(q, k) for k in range(1, 7)}
    summary["admissible_k"] = {
        style.value: _admissible(p, q, style)
        for style in (
            BoundaryStyle.UNCONSTRAINED,
            BoundaryStyle.STANDARD,
            BoundaryStyle.QUASI_STANDARD,
        )
    }
    return json.dumps(summary, indent=2)


resources_manager.register(
    ResourceDefinition(
        uri_pattern="dilations://obstructions",
        name="Dilation Obstructions",
        description="Dilation factors excluded per boundary style for non-tetragonal classes, split into impossible and not constructed",
        mime_type="application/json",
        handler=obstructions_handler,
    )
)

resources_manager.register(
    ResourceDefinition(
        uri_pattern="dilations://class/{p}/{q}",
        name="Empty Tetrahedron Class",
        description="Fundamental square, point counts and admissible k for the class (p, q)",
        mime_type="application/json",
        handler=class_summary_handler,
    )
)
