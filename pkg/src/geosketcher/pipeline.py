"""End-to-end build: sketch in, ordered layers and mesh artifacts out.

The CLI and the HTTP service both run this pipeline, so identical requests
produce byte-identical artifacts regardless of the entry point.
"""
from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

from . import jsonio
from .errors import (
    BaseAboveTerrainError,
    GeosketcherError,
    MissingCoverUnitError,
    NoValueAnchorError,
    SingularSystemError,
)
from .geomodel import assemble_model, build_horizon, validate_model
from .mesh import model_to_meshes, obj_bytes
from .sketch import Diagnostic, MapSketch, Severity, validate_sketch
from .stratigraphy import AgeOrder, CycleDiagnostic, build_graph, horizon_age_order, relative_ages
from .terrain import DEFAULT_GRID, GridSpec, Heightfield, build_terrain

GRID_AXIS_MIN = 2
GRID_AXIS_MAX = 2048


@dataclass(frozen=True)
class BuildRequest:
    sketch: MapSketch
    grid: tuple[int, int] = DEFAULT_GRID
    spacing: float | None = None
    model_base: float | None = None

    def __post_init__(self) -> None:
        nx, ny = self.grid
        for axis in (nx, ny):
            if not GRID_AXIS_MIN <= axis <= GRID_AXIS_MAX:
                raise ValueError(
                    f"grid axis {axis} outside [{GRID_AXIS_MIN}, {GRID_AXIS_MAX}]"
                )
        if self.spacing is not None and self.spacing <= 0:
            raise ValueError("spacing must be > 0")


@dataclass
class BuildError:
    kind: str  # cycle | singular_system | no_value_anchor | base_above_terrain | missing_cover_unit | invalid_sketch
    message: str
    detail: dict = field(default_factory=dict)


@dataclass
class BuildResult:
    diagnostics: list[Diagnostic]
    age_order: AgeOrder | None = None
    cycle: CycleDiagnostic | None = None
    error: BuildError | None = None
    artifacts: dict[str, bytes] = field(default_factory=dict)
    timings_ms: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.error is None


def diagnostics_json(diagnostics: list[Diagnostic]) -> list[dict]:
    return [{"severity": d.severity.value, "message": d.message, "path": d.path} for d in diagnostics]


def cycle_json(cycle: CycleDiagnostic) -> dict:
    return {
        "units": list(cycle.cycle),
        "edges": [
            {
                "younger": e.younger,
                "older": e.older,
                "kind": e.kind.value,
                "provenance": e.provenance.value,
            }
            for e in cycle.edges
        ],
    }


def heightfield_json_bytes(hf: Heightfield) -> bytes:
    spec = hf.spec
    return jsonio.dump_bytes(
        {
            "version": 1,
            "nx": spec.nx,
            "ny": spec.ny,
            "bounds": {
                "min": [spec.bounds.min.x, spec.bounds.min.y],
                "max": [spec.bounds.max.x, spec.bounds.max.y],
            },
            "z": [float(v) for v in hf.z],
        }
    )


def report_json(result: BuildResult, grid: tuple[int, int]) -> dict:
    report: dict = {
        "status": "ok" if result.ok else result.error.kind,
        "grid": list(grid),
        "diagnostics": diagnostics_json(result.diagnostics),
        "timings_ms": {k: round(v, 3) for k, v in result.timings_ms.items()},
        "artifacts": {
            name: {"bytes": len(blob), "sha256": hashlib.sha256(blob).hexdigest()}
            for name, blob in sorted(result.artifacts.items())
        },
    }
    if result.age_order is not None:
        report["age_order"] = list(result.age_order.units_oldest_first)
    if result.cycle is not None:
        report["cycle"] = cycle_json(result.cycle)
    if result.error is not None:
        report["error"] = {
            "kind": result.error.kind,
            "message": result.error.message,
            "detail": result.error.detail,
        }
    return report


def run_build(request: BuildRequest) -> BuildResult:
    """Validate, order, fit, assemble, and mesh a sketch; never raises for
    geology problems (they are reported on the result), only for I/O-free
    programming errors."""
    sketch = request.sketch
    timings: dict[str, float] = {}
    t0 = time.perf_counter()

    diagnostics = validate_sketch(sketch)
    timings["validate"] = (time.perf_counter() - t0) * 1e3
    result = BuildResult(diagnostics=diagnostics, timings_ms=timings)

    graph = build_graph(sketch)
    ages = relative_ages(graph)
    if isinstance(ages, CycleDiagnostic):
        result.cycle = ages
        result.error = BuildError(
            kind="cycle",
            message="relation annotations and boundaries imply a cyclic age relation",
            detail=cycle_json(ages),
        )
        return result
    result.age_order = ages
    if any(d.severity is Severity.ERROR for d in diagnostics):
        result.error = BuildError(
            kind="invalid_sketch",
            message="sketch has blocking diagnostics",
            detail={"diagnostics": diagnostics_json(diagnostics)},
        )
        return result

    try:
        t1 = time.perf_counter()
        terrain = build_terrain(sketch, spacing=request.spacing)
        timings["terrain"] = (time.perf_counter() - t1) * 1e3

        t2 = time.perf_counter()
        horizon_order = horizon_age_order(ages, sketch.horizons)
        horizons = [
            build_horizon(sketch, horizon_id, terrain, spacing=request.spacing, age_rank=rank)
            for rank, horizon_id in enumerate(horizon_order)
        ]
        timings["horizons"] = (time.perf_counter() - t2) * 1e3

        t3 = time.perf_counter()
        spec = GridSpec(request.grid[0], request.grid[1], sketch.bounds)
        horizon_to_unit = {h.horizon_id: h.below_unit for h in sketch.horizons}
        model = assemble_model(
            terrain,
            horizons,
            list(ages.units_oldest_first),
            horizon_to_unit,
            spec,
            model_base=request.model_base,
        )
        timings["assemble"] = (time.perf_counter() - t3) * 1e3

        model_diags = validate_model(model)
        result.diagnostics = diagnostics + model_diags
        if any(d.severity is Severity.ERROR for d in model_diags):
            result.error = BuildError(
                kind="invalid_model",
                message="assembled model violates its invariants",
                detail={"diagnostics": diagnostics_json(model_diags)},
            )
            return result

        t4 = time.perf_counter()
        meshes = model_to_meshes(model)
        result.artifacts["model.obj"] = obj_bytes(meshes)
        result.artifacts["terrain.json"] = heightfield_json_bytes(model.terrain)
        timings["mesh"] = (time.perf_counter() - t4) * 1e3
    except SingularSystemError as e:
        result.error = BuildError(kind="singular_system", message=str(e))
    except NoValueAnchorError as e:
        result.error = BuildError(kind="no_value_anchor", message=str(e))
    except BaseAboveTerrainError as e:
        result.error = BuildError(kind="base_above_terrain", message=str(e))
    except MissingCoverUnitError as e:
        result.error = BuildError(kind="missing_cover_unit", message=str(e))
    except GeosketcherError as e:
        result.error = BuildError(kind="geology_error", message=str(e))
    if result.error is not None:
        result.artifacts.clear()
    timings["total"] = (time.perf_counter() - t0) * 1e3
    return result
