"""Terrain from contour lines.

Sketch two nested ring contours of a hill plus a low outer ring, interpolate
the height field, sample it on a grid, and export the surface as an OBJ mesh.
"""
import json
import math
from pathlib import Path

import numpy as np

from geosketcher import GridSpec, build_terrain, heightfield_to_mesh, obj_bytes, parse_sketch, rasterize

OUT = Path(__file__).resolve().parent / "out"


def ring(cx, cy, r, n=72):
    return [
        [round(cx + r * math.cos(2 * math.pi * k / n), 9), round(cy + r * math.sin(2 * math.pi * k / n), 9)]
        for k in range(n)
    ]


doc = {
    "version": 1,
    "bounds": {"min": [0, 0], "max": [1000, 1000]},
    "datum_elevation": 80,
    "units": [{"id": "ground", "name": "Ground", "color": [120, 140, 90]}],
    "contours": [
        {"elevation": 100, "points": ring(500, 500, 400), "closed": True},
        {"elevation": 180, "points": ring(450, 520, 220), "closed": True},
        {"elevation": 260, "points": ring(420, 540, 90), "closed": True},
    ],
}

sketch = parse_sketch(json.dumps(doc))
terrain = build_terrain(sketch)
print(f"fitted terrain from {terrain.contour_count} contours "
      f"({len(terrain.interp.coefficients)} interpolation centers)")

for xy, label in [((420, 540), "hill summit"), ((500, 500), "map center"), ((900, 900), "far corner")]:
    print(f"  height at {label} {xy}: {terrain.evaluate(xy):8.2f} m")

spec = GridSpec(96, 96, sketch.bounds)
hf = rasterize(terrain, spec)
z = hf.z
print(f"rasterized {spec.nx}x{spec.ny}: min {z.min():.1f} m, max {z.max():.1f} m, "
      f"mean {z.mean():.1f} m")

OUT.mkdir(exist_ok=True)
path = OUT / "terrain_hill.obj"
path.write_bytes(obj_bytes([heightfield_to_mesh(hf, "terrain")]))
print(f"wrote {path} ({path.stat().st_size} bytes)")
