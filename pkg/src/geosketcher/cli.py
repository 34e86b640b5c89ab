"""Command-line frontend: validate sketches, build models, run the service.

Exit codes: 0 success, 1 geology errors (blocking diagnostics or an age
cycle), 2 parse or usage failure, 3 output I/O failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import GeosketcherError, SketchSyntaxError
from .pipeline import (
    GRID_AXIS_MAX,
    GRID_AXIS_MIN,
    BuildRequest,
    cycle_json,
    diagnostics_json,
    report_json,
    run_build,
)
from .sketch import Severity, parse_sketch, validate_sketch
from .stratigraphy import CycleDiagnostic, build_graph, relative_ages

EXIT_OK = 0
EXIT_GEOLOGY = 1
EXIT_PARSE = 2
EXIT_IO = 3


def _grid_arg(text: str) -> tuple[int, int]:
    try:
        if "x" in text:
            sx, sy = text.split("x", 1)
            grid = (int(sx), int(sy))
        else:
            grid = (int(text), int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or NxM, got {text!r}") from None
    for axis in grid:
        if not GRID_AXIS_MIN <= axis <= GRID_AXIS_MAX:
            raise argparse.ArgumentTypeError(
                f"grid axis {axis} outside [{GRID_AXIS_MIN}, {GRID_AXIS_MAX}]"
            )
    return grid


def _load_sketch(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        print(f"error: cannot read {path}: {e}", file=sys.stderr)
        return None
    try:
        return parse_sketch(data)
    except GeosketcherError as e:
        kind = "syntax" if isinstance(e, SketchSyntaxError) else "schema"
        print(f"error: {kind}: {e}", file=sys.stderr)
        return None


def cmd_validate(args: argparse.Namespace) -> int:
    sketch = _load_sketch(args.sketch)
    if sketch is None:
        return EXIT_PARSE
    diagnostics = validate_sketch(sketch)
    ages = relative_ages(build_graph(sketch))
    cyclic = isinstance(ages, CycleDiagnostic)

    if args.json:
        report = {
            "ok": not cyclic and all(d.severity is not Severity.ERROR for d in diagnostics),
            "diagnostics": diagnostics_json(diagnostics),
        }
        if cyclic:
            report["cycle"] = cycle_json(ages)
        else:
            report["age_order"] = list(ages.units_oldest_first)
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for d in diagnostics:
            print(f"{d.severity.value}: {d.path}: {d.message}")
        if cyclic:
            print("cycle: " + " -> ".join(ages.cycle) + " -> " + ages.cycle[0])
            for e in ages.edges:
                print(f"  {e.younger} younger than {e.older} [{e.provenance.value}, {e.kind.value}]")
        else:
            print("age order (oldest first): " + (", ".join(ages.units_oldest_first) or "(no units)"))

    if cyclic or any(d.severity is Severity.ERROR for d in diagnostics):
        return EXIT_GEOLOGY
    return EXIT_OK


def cmd_build(args: argparse.Namespace) -> int:
    sketch = _load_sketch(args.sketch)
    if sketch is None:
        return EXIT_PARSE
    try:
        request = BuildRequest(sketch=sketch, grid=args.grid, spacing=args.spacing, model_base=args.base)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    result = run_build(request)

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, blob in sorted(result.artifacts.items()):
            (out_dir / name).write_bytes(blob)
        report = report_json(result, args.grid)
        (out_dir / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    except OSError as e:
        print(f"error: cannot write outputs to {out_dir}: {e}", file=sys.stderr)
        return EXIT_IO

    for d in result.diagnostics:
        print(f"{d.severity.value}: {d.path}: {d.message}")
    if result.ok:
        order = ", ".join(result.age_order.units_oldest_first)
        print(f"age order (oldest first): {order}")
        print(f"wrote {', '.join(sorted(result.artifacts))} and report.json to {out_dir}")
        return EXIT_OK
    print(f"error: {result.error.kind}: {result.error.message}", file=sys.stderr)
    return EXIT_GEOLOGY


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    serve(port=args.port)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geosketcher",
        description="Layered 3D geological models from sketched topographic and geological maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a sketch file and print its age order")
    p_validate.add_argument("sketch", help="path to a sketch JSON file")
    p_validate.add_argument("--json", action="store_true", help="emit a JSON report")
    p_validate.set_defaults(func=cmd_validate)

    p_build = sub.add_parser("build", help="build a layered model and export meshes")
    p_build.add_argument("sketch", help="path to a sketch JSON file")
    p_build.add_argument("--out", default="out", help="output directory (default: out)")
    p_build.add_argument("--grid", type=_grid_arg, default=(128, 128), help="grid as N or NxM (default: 128)")
    p_build.add_argument("--spacing", type=float, default=None, help="constraint sample spacing in meters")
    p_build.add_argument("--base", type=float, default=None, help="model base elevation in meters")
    p_build.set_defaults(func=cmd_build)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=None, help="port (default: $GEOSKETCHER_PORT or 7878)")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: "list[str] | None" = None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


def entrypoint() -> None:
    sys.exit(main())
