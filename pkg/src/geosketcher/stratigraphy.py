"""Relative-age ordering of rock units via a directed younger-to-older graph.

Edges come from explicit relation annotations and from the younger/older pair
declared on each boundary line. An acyclic graph yields a deterministic total
order (oldest first, lexicographic tie-break); a cyclic one yields a shortest
contradiction cycle instead of an exception.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .errors import UnknownUnitError
from .sketch import HorizonSpec, MapSketch, RelationKind


class EdgeProvenance(Enum):
    ANNOTATION = "ANNOTATION"
    BOUNDARY_INFERENCE = "BOUNDARY_INFERENCE"


@dataclass(frozen=True)
class AgeEdge:
    """Directed younger -> older relation between two units."""

    younger: str
    older: str
    provenance: EdgeProvenance
    kind: RelationKind


@dataclass(frozen=True)
class StratGraph:
    nodes: frozenset[str]
    edges: tuple[AgeEdge, ...]  # canonical order: sorted by (younger, older)

    def edge_map(self) -> dict[tuple[str, str], AgeEdge]:
        return {(e.younger, e.older): e for e in self.edges}


@dataclass(frozen=True)
class AgeOrder:
    units_oldest_first: tuple[str, ...]


@dataclass(frozen=True)
class CycleDiagnostic:
    """A directed cycle of younger-than relations: no valid age order exists."""

    cycle: tuple[str, ...]
    edges: tuple[AgeEdge, ...]  # edges[i] connects cycle[i] -> cycle[(i+1) % len]


def make_graph(nodes: "frozenset[str] | set[str] | list[str]", edges: "list[AgeEdge]") -> StratGraph:
    """Canonicalize nodes/edges; duplicate pairs collapse with ANNOTATION winning."""
    node_set = frozenset(nodes)
    best: dict[tuple[str, str], AgeEdge] = {}
    for e in edges:
        if e.younger == e.older:
            raise ValueError(f'self relation on unit "{e.younger}"')
        if e.younger not in node_set or e.older not in node_set:
            raise ValueError(f"edge endpoint not in nodes: {e.younger} -> {e.older}")
        key = (e.younger, e.older)
        cur = best.get(key)
        if cur is None or (
            cur.provenance is EdgeProvenance.BOUNDARY_INFERENCE
            and e.provenance is EdgeProvenance.ANNOTATION
        ):
            best[key] = e
    return StratGraph(node_set, tuple(best[k] for k in sorted(best)))


def build_graph(sketch: MapSketch) -> StratGraph:
    """Nodes are every declared unit; edges come from annotations and boundaries."""
    edges: list[AgeEdge] = []
    for r in sketch.relations:
        edges.append(AgeEdge(r.younger, r.older, EdgeProvenance.ANNOTATION, r.kind))
    for b in sketch.boundaries:
        edges.append(
            AgeEdge(b.younger_unit, b.older_unit, EdgeProvenance.BOUNDARY_INFERENCE, RelationKind.ABOVE)
        )
    return make_graph(set(sketch.unit_ids()), edges)


def _shortest_cycle_through(start: str, adj: dict[str, list[str]]) -> tuple[str, ...] | None:
    """BFS over younger->older edges; returns a min-edge cycle containing start."""
    parent: dict[str, str] = {}
    dist = {start: 0}
    queue: deque[str] = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in adj.get(node, ()):
            if nxt == start:
                path = [node]
                while path[-1] != start:
                    path.append(parent[path[-1]])
                path.reverse()  # start ... node, with edge node -> start closing it
                return tuple(path)
            if nxt not in dist:
                dist[nxt] = dist[node] + 1
                parent[nxt] = node
                queue.append(nxt)
    return None


def _canonical_rotation(cycle: tuple[str, ...]) -> tuple[str, ...]:
    k = cycle.index(min(cycle))
    return cycle[k:] + cycle[:k]


def relative_ages(graph: StratGraph) -> AgeOrder | CycleDiagnostic:
    """Total order of units, oldest first, or a shortest contradiction cycle.

    Ordering rule: repeatedly emit the lexicographically smallest unit whose
    younger-than targets have all been emitted. The cycle returned on failure
    has minimum edge count; ties prefer the cycle whose smallest unit id is
    lexicographically least, then the lexicographically smallest rotation.
    """
    adj: dict[str, list[str]] = {n: [] for n in sorted(graph.nodes)}
    out_remaining = {n: 0 for n in graph.nodes}
    incoming: dict[str, list[str]] = {n: [] for n in graph.nodes}
    for e in graph.edges:
        adj[e.younger].append(e.older)
        out_remaining[e.younger] += 1
        incoming[e.older].append(e.younger)
    for n in adj:
        adj[n].sort()

    ready = [n for n in graph.nodes if out_remaining[n] == 0]
    heapq.heapify(ready)
    emitted: list[str] = []
    while ready:
        n = heapq.heappop(ready)
        emitted.append(n)
        for y in incoming[n]:
            out_remaining[y] -= 1
            if out_remaining[y] == 0:
                heapq.heappush(ready, y)
    if len(emitted) == len(graph.nodes):
        return AgeOrder(tuple(emitted))

    candidates: list[tuple[int, str, tuple[str, ...]]] = []
    leftover = sorted(set(graph.nodes) - set(emitted))
    for start in leftover:
        cyc = _shortest_cycle_through(start, adj)
        if cyc is not None:
            canon = _canonical_rotation(cyc)
            candidates.append((len(canon), min(canon), canon))
    best = min(candidates, key=lambda t: (t[0], t[1], t[2]))
    cycle = best[2]
    edge_map = graph.edge_map()
    edges = tuple(edge_map[(cycle[i], cycle[(i + 1) % len(cycle)])] for i in range(len(cycle)))
    return CycleDiagnostic(cycle, edges)


def horizon_age_order(order: AgeOrder, horizons: "list[HorizonSpec] | tuple[HorizonSpec, ...]") -> list[str]:
    """Horizon ids oldest first: a horizon inherits its below_unit's age rank."""
    rank = {u: i for i, u in enumerate(order.units_oldest_first)}
    for h in horizons:
        if h.below_unit not in rank:
            raise UnknownUnitError(
                f'horizon "{h.horizon_id}" sits on unit "{h.below_unit}" which is not in the age order'
            )
    return [h.horizon_id for h in sorted(horizons, key=lambda h: (rank[h.below_unit], h.horizon_id))]
