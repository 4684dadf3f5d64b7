#!/usr/bin/env python3
"""Unimodular dilations MCP server - classification, triangulation and verification tools."""

import asyncio
import logging
import sys
from typing import Any, Dict, List

import mcp.types as types
from mcp.server import Server
from mcp.server.lowlevel.helper_types import ReadResourceContents
from mcp.server.stdio import stdio_server

from .config import DilationConfigManager, load_environment

load_environment()

from .resources import resources_manager  # noqa: E402
from .tools import (  # noqa: E402
    classify_simplex,
    run_oracles,
    survey_dilations,
    triangulate_polytope,
    triangulate_simplex,
    verify_triangulation,
)

logger = logging.getLogger(__name__)

server = Server("unimodular-dilations")
dilation_manager = DilationConfigManager()

POINT_LIST = {
    "type": "array",
    "items": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
}


@server.list_tools()
async def list_tools() -> List[types.Tool]:
    """List all available dilation tools.

    Each tool description includes:
    - USE WHEN: Specific scenarios for using this tool
    - RETURNS: What data you'll get back
    - EXAMPLE: Concrete usage examples
    """
    return [
        types.Tool(
            name="classify_simplex",
            description="Classify an empty lattice tetrahedron. USE WHEN: You have four lattice points (or white parameters p, q) and need the normal form, volume, width and whether the class is tetragonal. RETURNS: p, q, canonical_p, tetragonal flag, width data and the unimodular map to the normal form; optionally the fundamental square with its maximal paths. EXAMPLE: p=5, q=13 gives canonical_p=5 and tetragonal=false.",
            inputSchema={
                "type": "object",
                "properties": {
                    "vertices": {**POINT_LIST, "description": "Four vertices of the tetrahedron"},
                    "p": {"type": "integer", "description": "White parameter p"},
                    "q": {"type": "integer", "description": "White parameter q (volume)"},
                    "lattice": {**POINT_LIST, "description": "Optional 3x3 lattice basis"},
                    "include_square": {
                        "type": "boolean",
                        "description": "Include fundamental-square paths and the crossing obstruction",
                        "default": False,
                    },
                },
            },
        ),
        types.Tool(
            name="triangulate_dilation",
            description="Build a unimodular triangulation of a dilated empty tetrahedron or lattice polytope. USE WHEN: You need kΔ(p,q) or kP cut into unimodular tetrahedra, with standard, quasi-standard or unconstrained boundary. RETURNS: method, cell and vertex counts, and the paths of written JSON/OFF files. EXAMPLE: p=5, q=13, k=12, boundary='standard' gives 22464 cells; k=7 needs boundary='quasi-standard'.",
            inputSchema={
                "type": "object",
                "properties": {
                    "p": {"type": "integer", "description": "White parameter p"},
                    "q": {"type": "integer", "description": "White parameter q"},
                    "k": {"type": "integer", "description": "Dilation factor", "minimum": 1},
                    "boundary": {
                        "type": "string",
                        "enum": ["standard", "quasi-standard", "unconstrained"],
                        "default": "standard",
                    },
                    "vertices": {**POINT_LIST, "description": "Polytope vertices instead of (p, q)"},
                    "lattice": {**POINT_LIST, "description": "Optional 3x3 lattice basis"},
                    "dissection": {
                        "type": "boolean",
                        "description": "Polytopes only: glue unconstrained cells into a dissection",
                        "default": False,
                    },
                    "output": {"type": "string", "description": "Triangulation JSON file name"},
                    "off": {"type": "string", "description": "Boundary surface OFF file name"},
                },
                "required": ["k"],
            },
        ),
        types.Tool(
            name="verify_triangulation",
            description="Check a triangulation file by brute force. USE WHEN: Confirming that a triangulation tiles its region, is unimodular and has the declared boundary. RETURNS: named pass/fail checks with counterexamples and counts. EXAMPLE: verify the file written by triangulate_dilation; a dissection fails only face_matching.",
            inputSchema={
                "type": "object",
                "properties": {
                    "path": {"type": "string", "description": "Triangulation JSON file"},
                    "region": {**POINT_LIST, "description": "Vertices of the region to tile"},
                    "boundary": {
                        "type": "string",
                        "enum": ["standard", "quasi-standard", "unconstrained"],
                    },
                },
                "required": ["path"],
            },
        ),
        types.Tool(
            name="survey_dilations",
            description="Sweep every class with q <= q_max over k. USE WHEN: Checking which (p, q, k) admit a construction and whether each passes verification. RETURNS: rows of p, q, k, style, method, cells, boundary result and seconds, as JSON or a CSV/Markdown table. EXAMPLE: q_max=5, k_max=8 lists obstructions at k = 2, 3, 5, 7.",
            inputSchema={
                "type": "object",
                "properties": {
                    "q_max": {"type": "integer", "default": 7, "minimum": 1},
                    "k_max": {"type": "integer", "default": 13, "minimum": 1},
                    "k_min": {"type": "integer", "default": 1, "minimum": 1},
                    "style": {"type": "string", "default": "auto"},
                    "verify": {"type": "boolean", "default": True},
                    "fmt": {"type": "string", "enum": ["json", "csv", "markdown"]},
                },
            },
        ),
        types.Tool(
            name="run_oracles",
            description="Rerun the exhaustive classification and second-dilation checks. USE WHEN: Confirming that every empty tetrahedron up to q_max has width one and a consistent normal form, or that 2Δ′(p,q) is triangulable exactly for tetragonal classes. RETURNS: named pass/fail checks with counterexamples and the number of empty tetrahedra found in the box. EXAMPLE: q_max=13, which='white', box=3 classifies every empty tetrahedron at the origin inside the cube of side 3.",
            inputSchema={
                "type": "object",
                "properties": {
                    "q_max": {"type": "integer", "default": 13, "minimum": 1},
                    "which": {"type": "string", "enum": ["all", "white", "k2"], "default": "all"},
                    "box": {"type": "integer", "default": 2, "minimum": 1, "maximum": 4},
                },
            },
        ),
    ]


@server.call_tool()
async def call_tool(name: str, arguments: Dict[str, Any]) -> List[types.TextContent]:
    """Execute a dilation tool."""
    try:
        if name == "classify_simplex":
            result = await classify_simplex(dilation_manager, **arguments)
        elif name == "triangulate_dilation":
            if "vertices" in arguments:
                result = await triangulate_polytope(dilation_manager, **arguments)
            else:
                result = await triangulate_simplex(dilation_manager, **arguments)
        elif name == "verify_triangulation":
            result = await verify_triangulation(dilation_manager, **arguments)
        elif name == "survey_dilations":
            result = await survey_dilations(dilation_manager, **arguments)
        elif name == "run_oracles":
            result = await run_oracles(dilation_manager, **arguments)
        else:
            return [types.TextContent(type="text", text=f"Unknown tool: {name}")]

        return [types.TextContent(type="text", text=result)]
    except Exception as e:
        return [types.TextContent(type="text", text=f"Error executing {name}: {str(e)}")]


@server.list_resources()
async def list_resources() -> List[types.Resource]:
    """List all available resources."""
    return resources_manager.list_resources()


@server.list_resource_templates()
async def list_resource_templates() -> List[types.ResourceTemplate]:
    """List all resource templates."""
    return resources_manager.list_resource_templates()


@server.read_resource()
async def read_resource(uri: str) -> List[ReadResourceContents]:
    """Read a resource."""
    content = await resources_manager.read_resource(str(uri), dilation_manager)
    return [ReadResourceContents(content=content, mime_type="application/json")]


async def async_main():
    """Run the dilations MCP server."""
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
    try:
        async with stdio_server() as (read_stream, write_stream):
            init_options = server.create_initialization_options()
            await server.run(read_stream, write_stream, init_options)
    except Exception as e:
        print(f"Server error: {e}", file=sys.stderr)
        import traceback

        traceback.print_exc(file=sys.stderr)


def main():
    """Entry point for the MCP server script."""
    asyncio.run(async_main())


if __name__ == "__main__":
    main()
