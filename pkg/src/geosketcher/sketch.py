"""Sketch vocabulary, its JSON file format, and structural validation.

A map sketch bundles topographic contours, geological unit boundaries, strike/dip
symbols, and relative-age annotations inside a rectangular domain. Parsing enforces
structural integrity (schema, finiteness, id resolution); geometric checks that a
user can meaningfully fix (points outside bounds, duplicate vertices, far-away dip
symbols) are reported by validate_sketch as diagnostics instead of exceptions.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from . import jsonio
from .errors import DanglingReferenceError, SchemaError, SketchSyntaxError
from .geometry import COINCIDENT_TOL, Bounds, Point2, Polyline, point_polyline_distance

# Dip angles steeper than this (degrees) are flagged as suspicious.
STEEP_DIP_WARN_DEG = 75.0


class HorizonKind(Enum):
    DEPOSIT = "DEPOSIT"
    ERODE = "ERODE"


class RelationKind(Enum):
    ABOVE = "ABOVE"
    CUTS = "CUTS"


class Severity(Enum):
    ERROR = "ERROR"
    WARNING = "WARNING"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str
    path: str


@dataclass(frozen=True)
class RockUnit:
    id: str
    name: str
    color: tuple[int, int, int]


@dataclass(frozen=True)
class ContourLine:
    line: Polyline
    elevation: float


@dataclass(frozen=True)
class BoundaryLine:
    """Mapped contact between two units, belonging to one geological horizon."""

    line: Polyline
    older_unit: str
    younger_unit: str
    horizon_id: str


@dataclass(frozen=True)
class DipSymbol:
    """Strike/dip reading. Right-hand rule: down-dip azimuth = strike azimuth + 90 deg.

    Azimuths are degrees clockwise from +y (north); azimuth a points along
    (sin a, cos a) in map coordinates.
    """

    position: Point2
    strike_azimuth_deg: float
    dip_deg: float
    horizon_id: str

    def down_dip_direction(self) -> tuple[float, float]:
        a = math.radians(self.strike_azimuth_deg + 90.0)
        return (math.sin(a), math.cos(a))


@dataclass(frozen=True)
class RelationAnnotation:
    younger: str
    older: str
    kind: RelationKind


@dataclass(frozen=True)
class HorizonSpec:
    """A geological surface: the top of below_unit, deposited or erosional."""

    horizon_id: str
    kind: HorizonKind
    below_unit: str


@dataclass(frozen=True)
class MapSketch:
    bounds: Bounds
    datum_elevation: float
    units: tuple[RockUnit, ...] = ()
    horizons: tuple[HorizonSpec, ...] = ()
    contours: tuple[ContourLine, ...] = ()
    boundaries: tuple[BoundaryLine, ...] = ()
    dips: tuple[DipSymbol, ...] = ()
    relations: tuple[RelationAnnotation, ...] = ()

    def unit_ids(self) -> tuple[str, ...]:
        return tuple(u.id for u in self.units)

    def horizon_ids(self) -> tuple[str, ...]:
        return tuple(h.horizon_id for h in self.horizons)

    def horizon(self, horizon_id: str) -> HorizonSpec:
        for h in self.horizons:
            if h.horizon_id == horizon_id:
                return h
        raise KeyError(horizon_id)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOP_KEYS = {
    "version",
    "bounds",
    "datum_elevation",
    "units",
    "horizons",
    "contours",
    "boundaries",
    "dips",
    "relations",
}


def _require_obj(value: Any, path: str, allowed: set[str], required: set[str]) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(path, f"expected object, got {type(value).__name__}")
    unknown = set(value) - allowed
    if unknown:
        raise SchemaError(path, f"unknown field(s): {', '.join(sorted(unknown))}")
    missing = required - set(value)
    if missing:
        raise SchemaError(path, f"missing field(s): {', '.join(sorted(missing))}")
    return value


def _require_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected array, got {type(value).__name__}")
    return value


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected number, got {type(value).__name__}")
    v = float(value)
    if not math.isfinite(v):
        raise SchemaError(path, "number must be finite")
    return v


def _string(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(path, f"expected string, got {type(value).__name__}")
    return value


def _boolean(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(path, f"expected boolean, got {type(value).__name__}")
    return value


def _point(value: Any, path: str) -> Point2:
    arr = _require_list(value, path)
    if len(arr) != 2:
        raise SchemaError(path, f"expected [x, y], got {len(arr)} elements")
    return Point2(_number(arr[0], f"{path}[0]"), _number(arr[1], f"{path}[1]"))


def _polyline(obj: dict, path: str) -> Polyline:
    pts_raw = _require_list(obj["points"], f"{path}.points")
    if len(pts_raw) < 2:
        raise SchemaError(f"{path}.points", "polyline needs at least 2 points")
    pts = tuple(_point(p, f"{path}.points[{i}]") for i, p in enumerate(pts_raw))
    closed = _boolean(obj["closed"], f"{path}.closed") if "closed" in obj else False
    return Polyline(pts, closed)


def _color(value: Any, path: str) -> tuple[int, int, int]:
    arr = _require_list(value, path)
    if len(arr) != 3:
        raise SchemaError(path, f"expected [r, g, b], got {len(arr)} elements")
    rgb = []
    for i, c in enumerate(arr):
        if isinstance(c, bool) or not isinstance(c, int):
            raise SchemaError(f"{path}[{i}]", "color component must be an integer")
        if not 0 <= c <= 255:
            raise SchemaError(f"{path}[{i}]", f"color component {c} outside [0, 255]")
        rgb.append(c)
    return (rgb[0], rgb[1], rgb[2])


def parse_sketch(data: bytes | str) -> MapSketch:
    """Parse sketch JSON, checking schema, field validity, and id resolution."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SketchSyntaxError("invalid UTF-8", e.start) from e
    else:
        text = data
    try:
        root = json.loads(text)
    except json.JSONDecodeError as e:
        offset = len(text[: e.pos].encode("utf-8"))
        raise SketchSyntaxError(e.msg, offset) from e

    top = _require_obj(root, "$", _TOP_KEYS, {"version", "bounds", "datum_elevation"})
    version = top["version"]
    if version != 1 or isinstance(version, bool):
        raise SchemaError("$.version", f"unsupported version {version!r}")

    bobj = _require_obj(top["bounds"], "$.bounds", {"min", "max"}, {"min", "max"})
    bounds = Bounds(_point(bobj["min"], "$.bounds.min"), _point(bobj["max"], "$.bounds.max"))
    if not (bounds.width > 0 and bounds.height > 0):
        raise SchemaError("$.bounds", "bounds must have positive width and height")
    datum = _number(top["datum_elevation"], "$.datum_elevation")

    units: list[RockUnit] = []
    seen_units: set[str] = set()
    for i, raw in enumerate(_require_list(top.get("units", []), "$.units")):
        path = f"$.units[{i}]"
        obj = _require_obj(raw, path, {"id", "name", "color"}, {"id", "name", "color"})
        uid = _string(obj["id"], f"{path}.id")
        if not uid:
            raise SchemaError(f"{path}.id", "unit id must be non-empty")
        if uid in seen_units:
            raise SchemaError(f"{path}.id", f'duplicate unit id "{uid}"')
        seen_units.add(uid)
        units.append(RockUnit(uid, _string(obj["name"], f"{path}.name"), _color(obj["color"], f"{path}.color")))

    horizons: list[HorizonSpec] = []
    seen_horizons: set[str] = set()
    for i, raw in enumerate(_require_list(top.get("horizons", []), "$.horizons")):
        path = f"$.horizons[{i}]"
        obj = _require_obj(raw, path, {"id", "kind", "below_unit"}, {"id", "kind", "below_unit"})
        hid = _string(obj["id"], f"{path}.id")
        if not hid:
            raise SchemaError(f"{path}.id", "horizon id must be non-empty")
        if hid in seen_horizons:
            raise SchemaError(f"{path}.id", f'duplicate horizon id "{hid}"')
        seen_horizons.add(hid)
        kind_s = _string(obj["kind"], f"{path}.kind")
        try:
            kind = HorizonKind(kind_s)
        except ValueError:
            raise SchemaError(f"{path}.kind", f'expected "DEPOSIT" or "ERODE", got "{kind_s}"') from None
        below = _string(obj["below_unit"], f"{path}.below_unit")
        if below not in seen_units:
            raise DanglingReferenceError(below, f"{path}.below_unit")
        horizons.append(HorizonSpec(hid, kind, below))

    contours: list[ContourLine] = []
    for i, raw in enumerate(_require_list(top.get("contours", []), "$.contours")):
        path = f"$.contours[{i}]"
        obj = _require_obj(raw, path, {"elevation", "points", "closed"}, {"elevation", "points"})
        contours.append(ContourLine(_polyline(obj, path), _number(obj["elevation"], f"{path}.elevation")))

    boundaries: list[BoundaryLine] = []
    for i, raw in enumerate(_require_list(top.get("boundaries", []), "$.boundaries")):
        path = f"$.boundaries[{i}]"
        obj = _require_obj(
            raw,
            path,
            {"horizon", "older_unit", "younger_unit", "points", "closed"},
            {"horizon", "older_unit", "younger_unit", "points"},
        )
        older = _string(obj["older_unit"], f"{path}.older_unit")
        younger = _string(obj["younger_unit"], f"{path}.younger_unit")
        horizon_id = _string(obj["horizon"], f"{path}.horizon")
        if older not in seen_units:
            raise DanglingReferenceError(older, f"{path}.older_unit")
        if younger not in seen_units:
            raise DanglingReferenceError(younger, f"{path}.younger_unit")
        if horizon_id not in seen_horizons:
            raise DanglingReferenceError(horizon_id, f"{path}.horizon")
        if older == younger:
            raise SchemaError(path, f'older_unit and younger_unit are both "{older}"')
        boundaries.append(BoundaryLine(_polyline(obj, path), older, younger, horizon_id))

    dips: list[DipSymbol] = []
    for i, raw in enumerate(_require_list(top.get("dips", []), "$.dips")):
        path = f"$.dips[{i}]"
        obj = _require_obj(
            raw,
            path,
            {"horizon", "position", "strike_azimuth_deg", "dip_deg"},
            {"horizon", "position", "strike_azimuth_deg", "dip_deg"},
        )
        horizon_id = _string(obj["horizon"], f"{path}.horizon")
        if horizon_id not in seen_horizons:
            raise DanglingReferenceError(horizon_id, f"{path}.horizon")
        strike = _number(obj["strike_azimuth_deg"], f"{path}.strike_azimuth_deg")
        if not 0.0 <= strike < 360.0:
            raise SchemaError(f"{path}.strike_azimuth_deg", f"strike azimuth {strike} outside [0, 360)")
        dip = _number(obj["dip_deg"], f"{path}.dip_deg")
        if not 0.0 <= dip < 90.0:
            raise SchemaError(f"{path}.dip_deg", f"dip angle {dip} outside [0, 90)")
        dips.append(DipSymbol(_point(obj["position"], f"{path}.position"), strike, dip, horizon_id))

    relations: list[RelationAnnotation] = []
    for i, raw in enumerate(_require_list(top.get("relations", []), "$.relations")):
        path = f"$.relations[{i}]"
        obj = _require_obj(raw, path, {"younger", "older", "kind"}, {"younger", "older", "kind"})
        younger = _string(obj["younger"], f"{path}.younger")
        older = _string(obj["older"], f"{path}.older")
        if younger not in seen_units:
            raise DanglingReferenceError(younger, f"{path}.younger")
        if older not in seen_units:
            raise DanglingReferenceError(older, f"{path}.older")
        if younger == older:
            raise SchemaError(path, f'younger and older are both "{younger}"')
        kind_s = _string(obj["kind"], f"{path}.kind")
        try:
            kind = RelationKind(kind_s)
        except ValueError:
            raise SchemaError(f"{path}.kind", f'expected "ABOVE" or "CUTS", got "{kind_s}"') from None
        relations.append(RelationAnnotation(younger, older, kind))

    return MapSketch(
        bounds=bounds,
        datum_elevation=datum,
        units=tuple(units),
        horizons=tuple(horizons),
        contours=tuple(contours),
        boundaries=tuple(boundaries),
        dips=tuple(dips),
        relations=tuple(relations),
    )


# ---------------------------------------------------------------------------
# Validation diagnostics
# ---------------------------------------------------------------------------


def default_max_dip_distance(bounds: Bounds) -> float:
    """Dip symbols farther than this from their horizon's boundaries look misplaced."""
    return 0.05 * bounds.diagonal


def _check_inside(line: Polyline, bounds: Bounds, path: str, out: list[Diagnostic]) -> None:
    for k, p in enumerate(line.points):
        if not bounds.contains(p):
            out.append(
                Diagnostic(
                    Severity.ERROR,
                    f"point ({jsonio.format_float(p.x)}, {jsonio.format_float(p.y)}) outside bounds",
                    f"{path}.points[{k}]",
                )
            )
            return


def _check_duplicates(line: Polyline, path: str, out: list[Diagnostic]) -> None:
    for k, (a, b) in enumerate(line.segments()):
        if a.distance_to(b) <= COINCIDENT_TOL:
            out.append(
                Diagnostic(
                    Severity.ERROR,
                    f"duplicate consecutive points at segment {k}",
                    f"{path}.points[{k}]",
                )
            )
            return


def validate_sketch(sketch: MapSketch, max_dip_distance: float | None = None) -> list[Diagnostic]:
    """Return diagnostics in document order; an empty list means the sketch is buildable."""
    if max_dip_distance is None:
        max_dip_distance = default_max_dip_distance(sketch.bounds)
    out: list[Diagnostic] = []

    for i, contour in enumerate(sketch.contours):
        path = f"$.contours[{i}]"
        _check_inside(contour.line, sketch.bounds, path, out)
        _check_duplicates(contour.line, path, out)

    for i, boundary in enumerate(sketch.boundaries):
        path = f"$.boundaries[{i}]"
        _check_inside(boundary.line, sketch.bounds, path, out)
        _check_duplicates(boundary.line, path, out)

    boundaries_by_horizon: dict[str, list[Polyline]] = {}
    for boundary in sketch.boundaries:
        boundaries_by_horizon.setdefault(boundary.horizon_id, []).append(boundary.line)

    for i, dip in enumerate(sketch.dips):
        path = f"$.dips[{i}]"
        if not sketch.bounds.contains(dip.position):
            out.append(Diagnostic(Severity.ERROR, "dip symbol outside bounds", f"{path}.position"))
        lines = boundaries_by_horizon.get(dip.horizon_id, [])
        if lines:
            d = min(point_polyline_distance(dip.position, line) for line in lines)
            if d > max_dip_distance:
                out.append(
                    Diagnostic(
                        Severity.WARNING,
                        f"dip symbol is {jsonio.format_float(d)} m from the nearest boundary of"
                        f' horizon "{dip.horizon_id}" (limit {jsonio.format_float(max_dip_distance)} m)',
                        path,
                    )
                )
        else:
            out.append(
                Diagnostic(
                    Severity.WARNING,
                    f'horizon "{dip.horizon_id}" has a dip symbol but no boundary line',
                    path,
                )
            )
        if dip.dip_deg > STEEP_DIP_WARN_DEG:
            out.append(
                Diagnostic(
                    Severity.WARNING,
                    f"dip of {jsonio.format_float(dip.dip_deg)} deg is steeper than"
                    f" {jsonio.format_float(STEEP_DIP_WARN_DEG)} deg and will produce extreme gradients",
                    f"{path}.dip_deg",
                )
            )

    return out


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _points_json(line: Polyline) -> list[list[float]]:
    return [[p.x, p.y] for p in line.points]


def sketch_to_dict(sketch: MapSketch) -> dict:
    """JSON-shaped dict mirroring the file schema (all lists present)."""
    return {
        "version": 1,
        "bounds": {
            "min": [sketch.bounds.min.x, sketch.bounds.min.y],
            "max": [sketch.bounds.max.x, sketch.bounds.max.y],
        },
        "datum_elevation": sketch.datum_elevation,
        "units": [{"id": u.id, "name": u.name, "color": list(u.color)} for u in sketch.units],
        "horizons": [
            {"id": h.horizon_id, "kind": h.kind.value, "below_unit": h.below_unit} for h in sketch.horizons
        ],
        "contours": [
            {"elevation": c.elevation, "points": _points_json(c.line), "closed": c.line.closed}
            for c in sketch.contours
        ],
        "boundaries": [
            {
                "horizon": b.horizon_id,
                "older_unit": b.older_unit,
                "younger_unit": b.younger_unit,
                "points": _points_json(b.line),
                "closed": b.line.closed,
            }
            for b in sketch.boundaries
        ],
        "dips": [
            {
                "horizon": d.horizon_id,
                "position": [d.position.x, d.position.y],
                "strike_azimuth_deg": d.strike_azimuth_deg,
                "dip_deg": d.dip_deg,
            }
            for d in sketch.dips
        ],
        "relations": [
            {"younger": r.younger, "older": r.older, "kind": r.kind.value} for r in sketch.relations
        ],
    }


def serialize_sketch(sketch: MapSketch) -> bytes:
    """Deterministic canonical JSON bytes; parse_sketch(serialize_sketch(s)) == s."""
    return jsonio.dump_bytes(sketch_to_dict(sketch))
