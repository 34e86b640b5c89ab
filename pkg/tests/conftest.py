"""Shared fixtures and generators for the test suite."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from geosketcher.hbrbf import Constraint

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

MINIMAL_SKETCH = (
    '{"version": 1, "bounds": {"min": [0, 0], "max": [10, 10]},'
    ' "datum_elevation": 0, "units": [{"id": "u1", "name": "Unit 1", "color": [120, 120, 120]}]}'
)


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


def fixture_bytes(name: str) -> bytes:
    return (FIXTURE_DIR / name).read_bytes()


def random_constraints(
    rng: np.ndarray,
    n: int,
    min_separation: float,
    p_gradient: float = 0.25,
    p_directional: float = 0.25,
    value_scale: float = 100.0,
    slope_scale: float = 2.0,
) -> list[Constraint]:
    """Well-separated random constraint mix in the unit square.

    The first three constraints are value anchors on a well-spread triangle so
    the degree-1 polynomial part is always determined (fit's precondition).
    """
    if n < 3:
        raise ValueError("need n >= 3 for a well-posed degree-1 problem")
    anchors = [
        (float(rng.uniform(0.02, 0.25)), float(rng.uniform(0.02, 0.25))),
        (float(rng.uniform(0.75, 0.98)), float(rng.uniform(0.02, 0.25))),
        (float(rng.uniform(0.02, 0.25)), float(rng.uniform(0.75, 0.98))),
    ]
    points: list[tuple[float, float]] = list(anchors)
    while len(points) < n:
        x, y = rng.uniform(0.0, 1.0, 2)
        if all((x - px) ** 2 + (y - py) ** 2 >= min_separation**2 for px, py in points):
            points.append((float(x), float(y)))
    constraints: list[Constraint] = []
    for i, (x, y) in enumerate(points):
        roll = rng.uniform()
        if i < 3 or roll >= p_gradient + p_directional:
            constraints.append(Constraint.value_at(x, y, float(rng.uniform(-value_scale, value_scale))))
        elif roll < p_gradient:
            gx, gy = rng.uniform(-slope_scale, slope_scale, 2)
            constraints.append(Constraint.gradient_at(x, y, float(gx), float(gy)))
        else:
            angle = rng.uniform(0.0, 2.0 * np.pi)
            constraints.append(
                Constraint.directional_at(
                    x, y, float(np.cos(angle)), float(np.sin(angle)), float(rng.uniform(-slope_scale, slope_scale))
                )
            )
    return constraints


def random_dag(rng, n_nodes: int, p_edge: float = 0.35) -> tuple[list[str], list[tuple[str, str]]]:
    """Random DAG over letter-named nodes (edges younger -> older, acyclic by rank)."""
    names = [chr(ord("a") + i) for i in range(n_nodes)]
    rank = list(rng.permutation(n_nodes))
    edges = []
    for i in range(n_nodes):
        for j in range(n_nodes):
            if rank[i] > rank[j] and rng.uniform() < p_edge:
                edges.append((names[i], names[j]))
    return names, edges


def random_digraph(rng, n_nodes: int, p_edge: float = 0.3) -> tuple[list[str], list[tuple[str, str]]]:
    """Random directed graph that may contain cycles."""
    names = [chr(ord("a") + i) for i in range(n_nodes)]
    edges = []
    for i in range(n_nodes):
        for j in range(n_nodes):
            if i != j and rng.uniform() < p_edge:
                edges.append((names[i], names[j]))
    return names, edges
