"""Planar geometry primitives shared by the sketch format and the modeling pipeline."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

# Consecutive polyline vertices closer than this (meters) count as duplicates.
COINCIDENT_TOL = 1e-9


@dataclass(frozen=True)
class Point2:
    """Map-plane point in meters; x is easting, y is northing."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x!r}, {self.y!r})")

    def distance_to(self, other: Point2) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned rectangle in map coordinates."""

    min: Point2
    max: Point2

    @property
    def width(self) -> float:
        return self.max.x - self.min.x

    @property
    def height(self) -> float:
        return self.max.y - self.min.y

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def contains(self, p: Point2) -> bool:
        return self.min.x <= p.x <= self.max.x and self.min.y <= p.y <= self.max.y


@dataclass(frozen=True)
class Polyline:
    """Ordered vertex chain; a closed polyline implies a final segment back to the start.

    The vertex list of a closed polyline does not repeat the first point.
    """

    points: tuple[Point2, ...]
    closed: bool = False

    def __post_init__(self) -> None:
        if len(self.points) < 2:
            raise ValueError("polyline needs at least 2 points")

    def segments(self) -> Iterator[tuple[Point2, Point2]]:
        pts = self.points
        for a, b in zip(pts, pts[1:]):
            yield a, b
        if self.closed:
            yield pts[-1], pts[0]

    def length(self) -> float:
        return sum(a.distance_to(b) for a, b in self.segments())


def point_segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    """Distance from p to the closed segment ab."""
    ax, ay = a.x, a.y
    dx, dy = b.x - ax, b.y - ay
    seg2 = dx * dx + dy * dy
    if seg2 <= 0.0:
        return p.distance_to(a)
    t = ((p.x - ax) * dx + (p.y - ay) * dy) / seg2
    t = min(1.0, max(0.0, t))
    return math.hypot(p.x - (ax + t * dx), p.y - (ay + t * dy))


def point_polyline_distance(p: Point2, line: Polyline) -> float:
    """Distance from p to the nearest point of the polyline (wrap segment included if closed)."""
    return min(point_segment_distance(p, a, b) for a, b in line.segments())
