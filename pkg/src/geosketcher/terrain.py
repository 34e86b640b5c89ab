"""Terrain height fields from sketched topographic contours."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import SingularSystemError
from .geometry import Bounds, Point2, Polyline
from .hbrbf import Constraint, HbrbfConfig, HbrbfInterpolant, fit
from .sketch import MapSketch

DEFAULT_GRID = (128, 128)


@dataclass(frozen=True)
class GridSpec:
    """Regular sample grid over a rectangle; node (i, j) is min + (i dx, j dy)."""

    nx: int
    ny: int
    bounds: Bounds

    def __post_init__(self) -> None:
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 samples per axis")

    def node_xy(self, i: int, j: int) -> Point2:
        b = self.bounds
        return Point2(
            b.min.x + i * (b.width / (self.nx - 1)),
            b.min.y + j * (b.height / (self.ny - 1)),
        )

    def grid_points(self) -> np.ndarray:
        """(nx*ny, 2) node coordinates in row-major order (j outer, i inner)."""
        b = self.bounds
        xs = b.min.x + np.arange(self.nx) * (b.width / (self.nx - 1))
        ys = b.min.y + np.arange(self.ny) * (b.height / (self.ny - 1))
        XX, YY = np.meshgrid(xs, ys)
        return np.stack([XX.reshape(-1), YY.reshape(-1)], axis=1)


@dataclass(frozen=True, eq=False)
class Heightfield:
    """Sampled heights, row-major: z[j*nx + i] is node (i, j)."""

    spec: GridSpec
    z: np.ndarray

    def __post_init__(self) -> None:
        z = np.asarray(self.z, dtype=float)
        if z.shape != (self.spec.nx * self.spec.ny,):
            raise ValueError(f"expected {self.spec.nx * self.spec.ny} samples, got {z.shape}")
        if not np.all(np.isfinite(z)):
            raise ValueError("heightfield contains non-finite values")
        object.__setattr__(self, "z", z)

    def value_at(self, i: int, j: int) -> float:
        return float(self.z[j * self.spec.nx + i])

    def as_grid(self) -> np.ndarray:
        return self.z.reshape(self.spec.ny, self.spec.nx)


@dataclass(frozen=True, eq=False)
class TerrainField:
    """Continuous terrain height function with fit provenance."""

    interp: HbrbfInterpolant
    contour_count: int
    sample_spacing: float | None

    def evaluate(self, point: Point2 | Sequence[float]) -> float:
        return self.interp.evaluate(point)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        return self.interp.evaluate_many(points)


def resample_polyline(line: Polyline, spacing: float) -> list[Point2]:
    """Points along the polyline at arc-length multiples of spacing.

    The first vertex is always included. Open polylines always end with the
    last vertex; a trailing sample closer than spacing/2 to it is replaced
    rather than kept alongside it. Closed polylines include the wrap-around
    segment in arc length and do not duplicate the start point.
    """
    if spacing <= 0.0:
        raise ValueError("spacing must be > 0")
    pts = line.points
    cum = [0.0]
    for a, b in line.segments():
        cum.append(cum[-1] + a.distance_to(b))
    total = cum[-1]
    verts = list(pts) + ([pts[0]] if line.closed else [])

    def at_arc(t: float) -> Point2:
        k = int(np.searchsorted(cum, t, side="right")) - 1
        k = min(k, len(verts) - 2)
        seg = cum[k + 1] - cum[k]
        if seg <= 0.0:
            return verts[k]
        f = (t - cum[k]) / seg
        a, b = verts[k], verts[k + 1]
        return Point2(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y))

    if total <= 0.0:
        return [pts[0]]

    samples: list[Point2] = []
    if line.closed:
        eps = 1e-12 * max(1.0, total)
        count = int(math.floor((total - eps) / spacing)) + 1
        return [at_arc(k * spacing) for k in range(count)]

    n_steps = int(math.floor(total / spacing + 1e-12))
    ts = [k * spacing for k in range(n_steps + 1)]
    samples = [at_arc(t) for t in ts]
    last = samples[-1]
    end = pts[-1]
    gap = last.distance_to(end)
    if gap > 1e-12 * max(1.0, total):
        if gap > spacing / 2.0 or len(samples) == 1:
            samples.append(end)
        else:
            samples[-1] = end
    return samples


def default_spacing(bounds: Bounds, dedup_radius: float = 0.0) -> float:
    """Contour sample spacing keeping desk-scale systems near 10^3 rows."""
    return max(bounds.diagonal / 200.0, 10.0 * dedup_radius)


def default_config(bounds: Bounds) -> HbrbfConfig:
    return HbrbfConfig(dedup_radius=1e-6 * bounds.diagonal)


def _check_conflicting_samples(
    points: list[Point2], elevations: list[float], contour_of: list[int], radius: float
) -> None:
    if len(points) < 2:
        return
    tree = cKDTree(np.asarray([(p.x, p.y) for p in points]))
    for a, b in sorted(tree.query_pairs(max(radius, 1e-9))):
        za, zb = elevations[a], elevations[b]
        if contour_of[a] != contour_of[b] and abs(za - zb) > 1e-9 * (1.0 + max(abs(za), abs(zb))):
            raise SingularSystemError(
                f"contours {contour_of[a]} and {contour_of[b]} share geometry near "
                f"({points[a].x:.6g}, {points[a].y:.6g}) with different elevations "
                f"{za:.6g} and {zb:.6g}"
            )


def build_terrain(
    sketch: MapSketch,
    spacing: float | None = None,
    config: HbrbfConfig | None = None,
) -> TerrainField:
    """Interpolate a terrain height field through the sketch's contour lines.

    With no contours the terrain is the constant datum elevation and no system
    is solved.
    """
    if config is None:
        config = default_config(sketch.bounds)
    if spacing is None:
        spacing = default_spacing(sketch.bounds, config.dedup_radius)
    if spacing <= 0.0:
        raise ValueError("spacing must be > 0")

    if not sketch.contours:
        return TerrainField(
            interp=HbrbfInterpolant.constant(sketch.datum_elevation, config),
            contour_count=0,
            sample_spacing=None,
        )

    points: list[Point2] = []
    elevations: list[float] = []
    contour_of: list[int] = []
    for idx, contour in enumerate(sketch.contours):
        for p in resample_polyline(contour.line, spacing):
            points.append(p)
            elevations.append(contour.elevation)
            contour_of.append(idx)

    _check_conflicting_samples(points, elevations, contour_of, config.dedup_radius)

    constraints = [Constraint.value_at(p.x, p.y, z) for p, z in zip(points, elevations)]
    interp = fit(constraints, config)
    return TerrainField(interp=interp, contour_count=len(sketch.contours), sample_spacing=spacing)


def rasterize(
    field: TerrainField | HbrbfInterpolant | Callable[[np.ndarray], np.ndarray],
    spec: GridSpec,
) -> Heightfield:
    """Sample a height function at every grid node.

    Node values are exactly the per-point evaluate results: evaluation
    accumulates in a fixed per-center order independent of batching.
    """
    pts = spec.grid_points()
    if isinstance(field, TerrainField):
        z = field.interp.evaluate_many(pts)
    elif isinstance(field, HbrbfInterpolant):
        z = field.evaluate_many(pts)
    else:
        z = np.asarray(field(pts), dtype=float).reshape(-1)
    return Heightfield(spec=spec, z=z)
