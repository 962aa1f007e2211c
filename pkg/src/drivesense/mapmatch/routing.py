"""Shortest paths over the road graph and the detour (getting-lost) measure."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import Unreachable
from .network import RoadNetwork


def shortest_path(network: RoadNetwork, from_node: int, to_node: int):
    """Minimal-length edge sequence from from_node to to_node.

    Ties in total length are broken by the lexicographically smallest
    edge-id sequence, which makes results deterministic and lets tests
    compare against exhaustive enumeration exactly.
    """
    if from_node not in network.nodes:
        raise KeyError(f"unknown node {from_node}")
    if to_node not in network.nodes:
        raise KeyError(f"unknown node {to_node}")
    if from_node == to_node:
        return [], 0.0
    # heap entries (dist, edge_id_path, node): tuple comparison yields the
    # lexicographic tie-break for free
    heap: list[tuple[float, tuple[int, ...], int]] = [(0.0, (), from_node)]
    settled: set[int] = set()
    while heap:
        dist, path, node = heapq.heappop(heap)
        if node in settled:
            continue
        settled.add(node)
        if node == to_node:
            return list(path), dist
        for eid in network.adjacency.get(node, ()):
            e = network.edges[eid]
            if e.to in settled:
                continue
            heapq.heappush(heap, (dist + e.length_m, path + (eid,), e.to))
    raise Unreachable(f"no path from {from_node} to {to_node}")


class DistanceCache:
    """Lazy single-source Dijkstra distances as dense arrays over nodes."""

    def __init__(self, network: RoadNetwork):
        self.network = network
        self.node_ids = sorted(network.nodes)
        self.node_index = {nid: i for i, nid in enumerate(self.node_ids)}
        self._rows: dict[int, np.ndarray] = {}

    def distances_from(self, source: int) -> np.ndarray:
        row = self._rows.get(source)
        if row is not None:
            return row
        n = len(self.node_ids)
        dist = np.full(n, np.inf)
        src = self.node_index[source]
        dist[src] = 0.0
        heap = [(0.0, source)]
        visited = set()
        while heap:
            d, node = heapq.heappop(heap)
            if node in visited:
                continue
            visited.add(node)
            for eid in self.network.adjacency.get(node, ()):
                e = self.network.edges[eid]
                nd = d + e.length_m
                j = self.node_index[e.to]
                if nd < dist[j]:
                    dist[j] = nd
                    heapq.heappush(heap, (nd, e.to))
        self._rows[source] = dist
        return dist

    def node_distance(self, a: int, b: int) -> float:
        return float(self.distances_from(a)[self.node_index[b]])


def position_distance(
    network: RoadNetwork, cache: DistanceCache, e1: int, off1: float, e2: int, off2: float,
    directional: bool = False,
) -> float:
    """Network travel distance from (edge, offset) to (edge, offset).

    With directional=False a small backward move on the same edge counts
    its absolute offset difference (lenient, suits noisy fix-to-fix
    advances); directional=True honors one-way travel and routes around.
    """
    edge1 = network.edges[e1]
    via = (edge1.length_m - off1) + cache.node_distance(edge1.to, network.edges[e2].frm) + off2
    if e1 == e2:
        if off2 >= off1:
            return min(off2 - off1, via)
        if not directional:
            return min(off1 - off2, via)
    return via


@dataclass
class DetourResult:
    driven_m: float
    shortest_m: Optional[float]
    ratio: Optional[float]
    flagged: bool
    degenerate: bool = False
    loop_length_m: Optional[float] = None


def driven_length(network: RoadNetwork, edge_sequence, off_first: float, off_last: float) -> float:
    """Distance along a connected edge sequence from an offset on the first
    edge to an offset on the last."""
    if not edge_sequence:
        return 0.0
    if len(edge_sequence) == 1:
        return abs(off_last - off_first)
    total = network.edges[edge_sequence[0]].length_m - off_first
    for eid in edge_sequence[1:-1]:
        total += network.edges[eid].length_m
    total += off_last
    return total


def detour_ratio(
    matched,
    network: RoadNetwork,
    cache: Optional[DistanceCache] = None,
    ratio_threshold: float = 1.6,
    min_shortest_m: float = 50.0,
) -> DetourResult:
    """Driven network length over the shortest network length between the
    trip's first and last matched positions. Elevated values proxy
    wayfinding trouble ("getting lost")."""
    assignments = matched.assignments
    if not assignments:
        raise ValueError("matched path has no assignments")
    cache = cache or DistanceCache(network)
    first, last = assignments[0], assignments[-1]
    driven = driven_length(network, matched.edge_sequence, first.offset_m, last.offset_m)
    shortest = position_distance(
        network, cache, first.edge_id, first.offset_m, last.edge_id, last.offset_m, directional=True
    )
    if not np.isfinite(shortest):
        return DetourResult(driven, None, None, False, degenerate=True, loop_length_m=driven)
    if shortest < min_shortest_m:
        # start == end (or nearly): ratio undefined, report the loop length
        return DetourResult(driven, shortest, None, driven > max(min_shortest_m * 4, 200.0),
                            degenerate=True, loop_length_m=driven)
    ratio = driven / shortest
    return DetourResult(driven, shortest, ratio, ratio > ratio_threshold)
