"""Triangle meshes from heightfields and layered models, with Wavefront OBJ output."""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import BinaryIO, Sequence

import numpy as np

from .geomodel import LayeredModel
from .jsonio import format_float
from .sketch import RockUnit
from .terrain import Heightfield

# Triangles with less than this area (square meters) are dropped as degenerate.
MIN_TRIANGLE_AREA = 1e-12


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Indexed triangle mesh; construction validates indices and drops slivers."""

    name: str
    vertices: np.ndarray  # (n, 3) float64
    triangles: np.ndarray  # (m, 3) int64

    def __post_init__(self) -> None:
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=float).reshape(-1, 3))
        t = np.ascontiguousarray(np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3))
        if t.size and (t.min() < 0 or t.max() >= len(v)):
            raise ValueError(f'mesh "{self.name}": triangle index out of range')
        t = t[triangle_areas(v, t) > MIN_TRIANGLE_AREA]
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)


def triangle_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    a = vertices[triangles[:, 0]]
    b = vertices[triangles[:, 1]]
    c = vertices[triangles[:, 2]]
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


def _grid_triangles(nx: int, ny: int, flip: bool = False) -> np.ndarray:
    """Two triangles per cell, split along the (i, j) -> (i+1, j+1) diagonal.

    Winding is counter-clockwise seen from +z (flip reverses it).
    """
    ii, jj = np.meshgrid(np.arange(nx - 1), np.arange(ny - 1))
    v00 = (jj * nx + ii).reshape(-1)
    v10 = v00 + 1
    v01 = v00 + nx
    v11 = v01 + 1
    tris = np.empty((2 * len(v00), 3), dtype=np.int64)
    tris[0::2] = np.stack([v00, v10, v11], axis=1)
    tris[1::2] = np.stack([v00, v11, v01], axis=1)
    if flip:
        tris = tris[:, ::-1]
    return tris


def heightfield_to_mesh(hf: Heightfield, name: str, flip: bool = False) -> TriMesh:
    """Grid surface mesh: nx*ny vertices, 2*(nx-1)*(ny-1) upward-facing triangles."""
    spec = hf.spec
    pts = spec.grid_points()
    vertices = np.column_stack([pts, hf.z])
    return TriMesh(name=name, vertices=vertices, triangles=_grid_triangles(spec.nx, spec.ny, flip))


def _boundary_ring(nx: int, ny: int) -> np.ndarray:
    """Node indices around the grid edge, counter-clockwise seen from +z."""
    bottom = np.arange(nx)  # j = 0, i ascending
    right = nx - 1 + nx * np.arange(1, ny)  # i = nx-1, j ascending
    top = nx * ny - 1 - np.arange(1, nx)  # j = ny-1, i descending
    left = nx * (ny - 1 - np.arange(1, ny - 1))  # i = 0, j descending (excl. corners)
    return np.concatenate([bottom, right, top, left])


def _skirt_quads(
    pts: np.ndarray, ring: np.ndarray, lower: np.ndarray, upper: np.ndarray, name: str
) -> TriMesh:
    """Vertical wall between two surfaces along the grid boundary ring."""
    n = len(ring)
    xy = pts[ring]
    bot = np.column_stack([xy, lower[ring]])
    top = np.column_stack([xy, upper[ring]])
    vertices = np.vstack([bot, top])
    nxt = np.roll(np.arange(n), -1)
    tris = np.empty((2 * n, 3), dtype=np.int64)
    tris[0::2] = np.stack([np.arange(n), nxt, nxt + n], axis=1)
    tris[1::2] = np.stack([np.arange(n), nxt + n, np.arange(n) + n], axis=1)
    return TriMesh(name=name, vertices=vertices, triangles=tris)


def model_to_meshes(model: LayeredModel, units: Sequence[RockUnit] | None = None) -> list[TriMesh]:
    """Surface meshes (terrain, every effective horizon, base plate) plus
    per-unit boundary skirts closing each layer volume.

    The units argument is accepted for symmetry with the sketch vocabulary and
    reserved for material metadata; geometry only needs the model.
    """
    spec = model.spec
    pts = spec.grid_points()
    meshes: list[TriMesh] = [heightfield_to_mesh(model.terrain, "terrain")]
    for horizon_id, hf in zip(model.horizon_ids, model.effective_horizons):
        clipped = Heightfield(spec, np.maximum(hf.z, model.model_base))
        meshes.append(heightfield_to_mesh(clipped, f"horizon:{horizon_id}"))
    base = Heightfield(spec, np.full(spec.nx * spec.ny, model.model_base))
    meshes.append(heightfield_to_mesh(base, "base", flip=True))

    ring = _boundary_ring(spec.nx, spec.ny)
    surfaces = [np.full(spec.nx * spec.ny, model.model_base)]
    surfaces += [np.maximum(hf.z, model.model_base) for hf in model.effective_horizons]
    surfaces.append(model.terrain.z)
    skirts: dict[str, list[TriMesh]] = {}
    for k, unit in enumerate(model.layer_units):
        wall = _skirt_quads(pts, ring, surfaces[k], surfaces[k + 1], f"skirt:{unit}")
        if len(wall.triangles):
            skirts.setdefault(unit, []).append(wall)
    for unit in model.layer_units:
        parts = skirts.pop(unit, None)
        if not parts:
            continue
        if len(parts) == 1:
            meshes.append(parts[0])
        else:
            offsets = np.cumsum([0] + [len(p.vertices) for p in parts[:-1]])
            meshes.append(
                TriMesh(
                    name=f"skirt:{unit}",
                    vertices=np.vstack([p.vertices for p in parts]),
                    triangles=np.vstack([p.triangles + o for p, o in zip(parts, offsets)]),
                )
            )
    return meshes


def write_obj(meshes: Sequence[TriMesh], out: BinaryIO) -> None:
    """ASCII OBJ: one object block per mesh, 9-significant-digit coordinates,
    1-based face indices offset across objects, LF line endings."""
    offset = 1
    for mesh in meshes:
        out.write(f"o {mesh.name}\n".encode("utf-8"))
        for x, y, z in mesh.vertices:
            out.write(f"v {format_float(x)} {format_float(y)} {format_float(z)}\n".encode("utf-8"))
        for a, b, c in mesh.triangles:
            out.write(f"f {a + offset} {b + offset} {c + offset}\n".encode("utf-8"))
        offset += len(mesh.vertices)


def obj_bytes(meshes: Sequence[TriMesh]) -> bytes:
    buf = io.BytesIO()
    write_obj(meshes, buf)
    return buf.getvalue()
