"""Horizon surface fitting and layered model assembly.

Each geological horizon is fitted as a height field from its outcrop traces
(boundary lines pinned to the terrain height) and dip symbols (converted to
gradient data). Horizons are then clipped oldest-to-youngest against the
terrain and against every younger surface, which enforces erosional truncation
and keeps conformable surfaces from crossing; the remaining intervals between
surfaces become labeled layer columns.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from . import jsonio
from .errors import (
    BaseAboveTerrainError,
    MissingCoverUnitError,
    NoValueAnchorError,
)
from .hbrbf import Constraint, HbrbfConfig, HbrbfInterpolant, fit
from .sketch import Diagnostic, HorizonKind, MapSketch, Severity
from .terrain import GridSpec, Heightfield, TerrainField, default_config, default_spacing, rasterize, resample_polyline

# Interval thickness at or below this (meters) is dropped from columns.
MIN_LAYER_THICKNESS = 1e-9


@dataclass(frozen=True, eq=False)
class HorizonField:
    """Fitted height function of one horizon, before clipping."""

    horizon_id: str
    kind: HorizonKind
    raw: HbrbfInterpolant
    age_rank: int

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        return self.raw.evaluate_many(points)


@dataclass(frozen=True, eq=False)
class LayeredModel:
    """Grid of labeled depth columns plus the clipped horizon surfaces.

    layer_units[k] labels the material between surface k-1 and surface k,
    where surface -1 is the model base, surfaces 0..n-1 are the effective
    horizons oldest first, and the terrain caps the final (cover) layer.
    """

    spec: GridSpec
    terrain: Heightfield
    horizon_ids: tuple[str, ...]
    effective_horizons: tuple[Heightfield, ...]
    layer_units: tuple[str, ...]
    columns: tuple[tuple[tuple[float, float, str], ...], ...]
    model_base: float


def dip_gradient(strike_azimuth_deg: float, dip_deg: float) -> tuple[float, float]:
    """Height gradient implied by a strike/dip reading.

    Down-dip azimuth is strike + 90 deg (clockwise from north); azimuth a maps
    to direction (sin a, cos a). Height falls down-dip at tan(dip).
    """
    a = math.radians(strike_azimuth_deg + 90.0)
    slope = math.tan(math.radians(dip_deg))
    return (-slope * math.sin(a), -slope * math.cos(a))


def build_horizon(
    sketch: MapSketch,
    horizon_id: str,
    terrain: TerrainField,
    spacing: float | None = None,
    config: HbrbfConfig | None = None,
    age_rank: int = 0,
) -> HorizonField:
    """Fit one horizon from its outcrop traces and dip symbols.

    Boundary lines resample to value constraints pinned to the terrain height
    (the outcrop is where the surface meets the ground); each dip symbol adds
    a gradient constraint. At least one value constraint is required.
    """
    if config is None:
        config = default_config(sketch.bounds)
    if spacing is None:
        spacing = default_spacing(sketch.bounds, config.dedup_radius)
    spec = sketch.horizon(horizon_id)

    constraints: list[Constraint] = []
    for boundary in sketch.boundaries:
        if boundary.horizon_id != horizon_id:
            continue
        pts = resample_polyline(boundary.line, spacing)
        arr = np.asarray([(p.x, p.y) for p in pts], dtype=float)
        heights = terrain.evaluate_many(arr)
        constraints.extend(
            Constraint.value_at(p.x, p.y, float(z)) for p, z in zip(pts, heights)
        )
    n_value = len(constraints)
    for dip in sketch.dips:
        if dip.horizon_id != horizon_id:
            continue
        gx, gy = dip_gradient(dip.strike_azimuth_deg, dip.dip_deg)
        constraints.append(Constraint.gradient_at(dip.position.x, dip.position.y, gx, gy))

    if n_value == 0:
        raise NoValueAnchorError(
            f'horizon "{horizon_id}" has only derivative data; its height is undetermined'
            " (add a boundary line)"
        )
    interp = fit(constraints, config)
    return HorizonField(horizon_id=horizon_id, kind=spec.kind, raw=interp, age_rank=age_rank)


def default_model_base(terrain: Heightfield) -> float:
    """Quarter-relief (at least 1 m) below the lowest terrain point."""
    lo = float(np.min(terrain.z))
    hi = float(np.max(terrain.z))
    return lo - max(0.25 * (hi - lo), 1.0)


def effective_heights(raws: Sequence[np.ndarray], terrain_z: np.ndarray) -> list[np.ndarray]:
    """Clip raw horizon heights (oldest first) by the terrain and all younger surfaces."""
    eff: list[np.ndarray] = [None] * len(raws)  # type: ignore[list-item]
    upper = terrain_z
    for i in range(len(raws) - 1, -1, -1):
        eff[i] = np.minimum(raws[i], upper)
        upper = eff[i]
    return eff


def assemble_model(
    terrain: TerrainField,
    horizons: Sequence[HorizonField],
    units_oldest_first: Sequence[str],
    horizon_to_unit: Mapping[str, str],
    spec: GridSpec,
    model_base: float | None = None,
) -> LayeredModel:
    """Stack clipped horizon surfaces into labeled columns over the grid.

    horizons must be ordered oldest first; horizon_to_unit maps each horizon id
    to the unit whose top it is. The youngest unit that owns no horizon labels
    the interval between the youngest horizon and the terrain.
    """
    terrain_hf = rasterize(terrain, spec)
    T = terrain_hf.z
    if model_base is None:
        model_base = default_model_base(terrain_hf)
    if not model_base < float(np.min(T)):
        raise BaseAboveTerrainError(
            f"model base {jsonio.format_float(model_base)} is not below the minimum terrain height "
            f"{jsonio.format_float(float(np.min(T)))}"
        )

    owned = set(horizon_to_unit[h.horizon_id] for h in horizons)
    cover_candidates = [u for u in units_oldest_first if u not in owned]
    if not cover_candidates:
        raise MissingCoverUnitError(
            "every unit is the below_unit of some horizon; no unit remains for the cover layer"
        )
    cover = cover_candidates[-1]

    raws = [rasterize(h.raw, spec).z for h in horizons]
    eff = effective_heights(raws, T)
    surfaces = [np.maximum(e, model_base) for e in eff]

    layer_units = tuple(horizon_to_unit[h.horizon_id] for h in horizons) + (cover,)
    n_nodes = spec.nx * spec.ny
    columns: list[tuple[tuple[float, float, str], ...]] = []
    for node in range(n_nodes):
        col: list[tuple[float, float, str]] = []
        z_bottom = model_base
        for k, surface in enumerate(surfaces):
            z_top = float(surface[node])
            if z_top - z_bottom > MIN_LAYER_THICKNESS:
                col.append((z_bottom, z_top, layer_units[k]))
                z_bottom = z_top
        z_top = float(T[node])
        if z_top - z_bottom > MIN_LAYER_THICKNESS:
            col.append((z_bottom, z_top, layer_units[-1]))
        columns.append(tuple(col))

    return LayeredModel(
        spec=spec,
        terrain=terrain_hf,
        horizon_ids=tuple(h.horizon_id for h in horizons),
        effective_horizons=tuple(Heightfield(spec, e) for e in eff),
        layer_units=layer_units,
        columns=tuple(columns),
        model_base=model_base,
    )


def _node_label(spec: GridSpec, node: int) -> str:
    i = node % spec.nx
    j = node // spec.nx
    p = spec.node_xy(i, j)
    return f"node ({i}, {j}) at ({jsonio.format_float(p.x)}, {jsonio.format_float(p.y)})"


def validate_model(model: LayeredModel, tol: float = 1e-9) -> list[Diagnostic]:
    """Numerically re-check every layered-model invariant; empty list means valid."""
    out: list[Diagnostic] = []
    spec = model.spec
    T = model.terrain.z
    n_nodes = spec.nx * spec.ny
    unit_set = set(model.layer_units)

    for h_idx, hf in enumerate(model.effective_horizons):
        above = hf.z > T + tol
        if np.any(above):
            node = int(np.argmax(above))
            out.append(
                Diagnostic(
                    Severity.ERROR,
                    f'effective horizon "{model.horizon_ids[h_idx]}" exceeds the terrain at '
                    f"{_node_label(spec, node)}",
                    f"$.effective_horizons[{h_idx}]",
                )
            )
    for h_idx in range(len(model.effective_horizons) - 1):
        older = model.effective_horizons[h_idx].z
        younger = model.effective_horizons[h_idx + 1].z
        bad = older > younger + tol
        if np.any(bad):
            node = int(np.argmax(bad))
            out.append(
                Diagnostic(
                    Severity.ERROR,
                    f'effective horizon "{model.horizon_ids[h_idx]}" rises above younger '
                    f'"{model.horizon_ids[h_idx + 1]}" at {_node_label(spec, node)}',
                    f"$.effective_horizons[{h_idx}]",
                )
            )

    for node in range(n_nodes):
        col = model.columns[node]
        z_prev = model.model_base
        for k, (z_bottom, z_top, unit) in enumerate(col):
            path = f"$.columns[{node}][{k}]"
            if unit not in unit_set:
                out.append(Diagnostic(Severity.ERROR, f'unknown unit "{unit}"', path))
            if z_top < z_bottom - tol:
                out.append(
                    Diagnostic(Severity.ERROR, f"inverted interval at {_node_label(spec, node)}", path)
                )
            if abs(z_bottom - z_prev) > tol:
                out.append(
                    Diagnostic(
                        Severity.ERROR,
                        f"gap or overlap before interval {k} at {_node_label(spec, node)}",
                        path,
                    )
                )
            z_prev = z_top
        if abs(z_prev - float(T[node])) > tol:
            out.append(
                Diagnostic(
                    Severity.ERROR,
                    f"column top does not reach the terrain at {_node_label(spec, node)}",
                    f"$.columns[{node}]",
                )
            )
    return out


def raise_effective_horizon(model: LayeredModel, horizon_index: int, delta: float) -> LayeredModel:
    """Copy of the model with one effective horizon shifted; for corruption tests."""
    lifted = list(model.effective_horizons)
    lifted[horizon_index] = Heightfield(model.spec, lifted[horizon_index].z + delta)
    return replace(model, effective_horizons=tuple(lifted))
