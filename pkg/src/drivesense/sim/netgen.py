"""Synthetic grid road networks.

A rows x cols lattice with the given spacing; node r*cols + c sits r
blocks north and c blocks east of the origin. Every adjacent pair gets
two directed edges. Rows listed in highway_rows carry highway class and
a 100 kph limit; everything else is local at 40 kph.
"""

from __future__ import annotations

from ..geo import LocalProjection, haversine
from ..mapmatch.network import Edge, RoadNetwork, ROAD_HIGHWAY, ROAD_LOCAL

DEFAULT_ORIGIN = (26.37, -80.10)


def gen_network(
    rows: int,
    cols: int,
    spacing_m: float,
    highway_rows=(),
    seed: int = 0,
    origin=DEFAULT_ORIGIN,
) -> RoadNetwork:
    if rows < 2 or cols < 2:
        raise ValueError("rows and cols must be >= 2")
    if spacing_m <= 0:
        raise ValueError("spacing_m must be positive")
    highway_rows = set(highway_rows)
    proj = LocalProjection(*origin)

    nodes = {}
    for r in range(rows):
        for c in range(cols):
            lat, lon = proj.to_latlon(c * spacing_m, r * spacing_m)
            nodes[r * cols + c] = (float(lat), float(lon))

    edges = {}
    eid = 0

    def add_pair(a: int, b: int, road_class: str, limit: float):
        nonlocal eid
        for frm, to in ((a, b), (b, a)):
            poly = [nodes[frm], nodes[to]]
            edges[eid] = Edge(
                id=eid,
                frm=frm,
                to=to,
                polyline=poly,
                length_m=haversine(poly[0], poly[1]),
                road_class=road_class,
                speed_limit_kph=limit,
            )
            eid += 1

    for r in range(rows):
        for c in range(cols):
            n = r * cols + c
            if c + 1 < cols:  # east-west street along row r
                cls = ROAD_HIGHWAY if r in highway_rows else ROAD_LOCAL
                add_pair(n, n + 1, cls, 100.0 if cls == ROAD_HIGHWAY else 40.0)
            if r + 1 < rows:  # north-south street
                add_pair(n, n + cols, ROAD_LOCAL, 40.0)

    return RoadNetwork(nodes=nodes, edges=edges)
