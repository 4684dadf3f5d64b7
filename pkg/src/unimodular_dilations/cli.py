"""Command-line interface: classify, triangulate, verify, survey, square and oracles."""

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .config import DilationConfigManager, load_environment
from .fundamental_square import KIND_PAIR, KIND_X, KIND_Y, square_context
from .lattice_core import LatticeError
from .tools import (
    classify_simplex,
    run_oracles,
    square_ascii,
    square_svg,
    survey_dilations,
    triangulate_polytope,
    triangulate_simplex,
    verify_triangulation,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _read_json(path: str) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise LatticeError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise LatticeError(f"{path} is not valid JSON: {e}") from e


def _emit(result: str) -> int:
    """Print a tool result; errors go to stderr with their exit code."""
    data = json.loads(result)
    if "error" in data:
        print(f"error: {data['error']}", file=sys.stderr)
        return EXIT_FAILED if data.get("errorType") == "InternalError" else EXIT_USAGE
    print(result)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace, manager: DilationConfigManager) -> int:
    if args.pq:
        p, q = args.pq
        result = asyncio.run(classify_simplex(manager, p=p, q=q, include_square=args.square))
    else:
        data = _read_json(args.file)
        result = asyncio.run(
            classify_simplex(
                manager,
                vertices=data.get("vertices"),
                lattice=data.get("lattice"),
                include_square=args.square,
            )
        )
    if args.json:
        return _emit(result)
    data = json.loads(result)
    if "error" in data:
        return _emit(result)
    tetragonal = str(data["tetragonal"]).lower()
    print(f"q={data['q']} p={data['p']} canonical_p={data['canonical_p']} tetragonal={tetragonal}")
    if data["unimodular"]:
        print("unimodular")
    mapping = data["to_canonical"]
    print(f"to_canonical: linear={mapping['linear']} translation={mapping['translation']}")
    return EXIT_OK


def cmd_triangulate(args: argparse.Namespace, manager: DilationConfigManager) -> int:
    if args.polytope:
        data = _read_json(args.polytope)
        result = asyncio.run(
            triangulate_polytope(
                manager,
                data.get("vertices"),
                args.k,
                args.boundary,
                lattice=data.get("lattice"),
                dissection=args.dissection,
                output=args.output,
                off=args.off,
            )
        )
    else:
        p, q = args.pq
        result = asyncio.run(
            triangulate_simplex(
                manager,
                p,
                q,
                args.k,
                args.boundary,
                output=args.output,
                off=args.off,
                height=args.height,
            )
        )
    return _emit(result)


def cmd_verify(args: argparse.Namespace, manager: DilationConfigManager) -> int:
    region: Optional[List[List[int]]] = None
    if args.region:
        region = _read_json(args.region).get("vertices")
    result = asyncio.run(
        verify_triangulation(manager, path=args.file, region=region, boundary=args.boundary)
    )
    status = _emit(result)
    if status != EXIT_OK:
        return status
    return EXIT_OK if json.loads(result)["passed"] else EXIT_FAILED


def cmd_survey(args: argparse.Namespace, manager: DilationConfigManager) -> int:
    result = asyncio.run(
        survey_dilations(
            manager,
            q_max=args.qmax,
            k_max=args.kmax,
            k_min=args.kmin,
            style=args.style,
            verify=not args.no_verify,
            fmt=args.format,
        )
    )
    data = json.loads(result)
    if "error" in data or args.format == "json":
        status = _emit(result)
    else:
        print(data["table"], end="")
        status = EXIT_OK
    if status == EXIT_OK and data.get("failed"):
        return EXIT_FAILED
    return status


def cmd_square(args: argparse.Namespace, manager: DilationConfigManager) -> int:
    p, q = args.pq
    ctx = square_context(p, q)
    if args.svg:
        Path(args.svg).write_text(square_svg(ctx, args.kind))
        print(f"wrote {args.svg}")
    else:
        print(square_ascii(ctx), end="")
    return EXIT_OK


def cmd_oracles(args: argparse.Namespace, manager: DilationConfigManager) -> int:
    result = asyncio.run(run_oracles(manager, args.qmax, args.which, args.box))
    status = _emit(result)
    if status != EXIT_OK:
        return status
    return EXIT_OK if json.loads(result)["passed"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unimodular-dilations",
        description="Unimodular triangulations of dilated empty lattice tetrahedra and polytopes.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    parser.add_argument("--jobs", type=int, default=None, help="Worker processes")
    sub = parser.add_subparsers(dest="command", required=True)

    classify = sub.add_parser("classify", help="Classify an empty lattice tetrahedron")
    source = classify.add_mutually_exclusive_group(required=True)
    source.add_argument("file", nargs="?", help="Polytope JSON with four vertices")
    source.add_argument("--pq", nargs=2, type=int, metavar=("P", "Q"))
    classify.add_argument("--square", action="store_true", help="Include square paths")
    classify.add_argument("--json", action="store_true", help="Print the full JSON result")
    classify.set_defaults(handler=cmd_classify)

    tri = sub.add_parser("triangulate", help="Triangulate k times a simplex or polytope")
    target = tri.add_mutually_exclusive_group(required=True)
    target.add_argument("--pq", nargs=2, type=int, metavar=("P", "Q"))
    target.add_argument("--polytope", help="Polytope JSON file")
    tri.add_argument("--k", type=int, required=True, help="Dilation factor")
    tri.add_argument(
        "--boundary",
        default="standard",
        choices=["standard", "quasi", "quasi-standard", "free", "unconstrained"],
    )
    tri.add_argument("--dissection", action="store_true", help="Polytopes: allow a dissection")
    tri.add_argument("--height", type=int, default=None, help="Interface height for k >= 4")
    tri.add_argument("--output", "-o", required=True, help="Triangulation JSON file")
    tri.add_argument("--off", help="Boundary surface OFF file")
    tri.set_defaults(handler=cmd_triangulate)

    verify = sub.add_parser("verify", help="Verify a triangulation file")
    verify.add_argument("file", help="Triangulation JSON file")
    verify.add_argument("--region", help="Polytope JSON whose vertices bound the region")
    verify.add_argument("--boundary", help="Boundary style to check instead of the declared one")
    verify.set_defaults(handler=cmd_verify)

    survey = sub.add_parser("survey", help="Build and verify every class up to q_max")
    survey.add_argument("--qmax", type=int, default=7)
    survey.add_argument("--kmax", type=int, default=13)
    survey.add_argument("--kmin", type=int, default=1)
    survey.add_argument("--style", default="auto", help="auto, standard, quasi or free")
    survey.add_argument("--no-verify", action="store_true")
    survey.add_argument("--format", default="markdown", choices=["csv", "markdown", "json"])
    survey.set_defaults(handler=cmd_survey)

    square = sub.add_parser("square", help="Draw the fundamental square")
    square.add_argument("--pq", nargs=2, type=int, metavar=("P", "Q"), required=True)
    square.add_argument("--kind", default=KIND_Y, choices=[KIND_X, KIND_Y, KIND_PAIR])
    square.add_argument("--svg", help="Write an SVG file instead of ASCII output")
    square.set_defaults(handler=cmd_square)

    oracles = sub.add_parser("oracles", help="Exhaustive classification and k = 2 oracles")
    oracles.add_argument("--qmax", type=int, default=13)
    oracles.add_argument("--which", default="all", choices=["all", "white", "k2"])
    oracles.add_argument("--box", type=int, default=2, help="Side of the enumeration cube, 1 to 4")
    oracles.set_defaults(handler=cmd_oracles)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs is not None and args.jobs < 1:
        parser.error("--jobs must be at least 1")
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    load_environment()
    manager = DilationConfigManager()
    try:
        manager.override(jobs=args.jobs, output_dir=Path("."))
        return args.handler(args, manager)
    except (LatticeError, ValueError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
