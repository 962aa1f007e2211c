"""Road network graph: nodes, directed edges with centerline polylines.

Serialized as network.json:

    {"nodes": [{"id": 0, "lat": ..., "lon": ...}, ...],
     "edges": [{"id": 0, "from": 0, "to": 1, "polyline": [[lat, lon], ...],
                "length_m": ..., "road_class": "local", "speed_limit_kph": 40}, ...]}

Edge lengths must agree with the haversine sum of their polyline within
0.1%; load fails otherwise. Connected components are identified at load
(treating edges as undirected for reachability bookkeeping).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..geo import polyline_length_m

ROAD_HIGHWAY = "highway"
ROAD_ARTERIAL = "arterial"
ROAD_LOCAL = "local"
ROAD_CLASSES = (ROAD_HIGHWAY, ROAD_ARTERIAL, ROAD_LOCAL)

LENGTH_TOLERANCE = 1e-3  # 0.1%


@dataclass
class Edge:
    id: int
    frm: int
    to: int
    polyline: list  # [(lat, lon), ...] with >= 2 points
    length_m: float
    road_class: str = ROAD_LOCAL
    speed_limit_kph: float = 40.0


@dataclass
class RoadNetwork:
    nodes: dict[int, tuple[float, float]]
    edges: dict[int, Edge]
    adjacency: dict[int, list[int]] = field(default_factory=dict)
    node_component: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.adjacency:
            self.adjacency = {nid: [] for nid in self.nodes}
            for e in self.edges.values():
                self.adjacency.setdefault(e.frm, []).append(e.id)
            for nid in self.adjacency:
                self.adjacency[nid].sort()
        if not self.node_component:
            self.node_component = self._components()

    def _components(self) -> dict[int, int]:
        # union-find over undirected reachability
        parent = {nid: nid for nid in self.nodes}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.edges.values():
            ra, rb = find(e.frm), find(e.to)
            if ra != rb:
                parent[ra] = rb
        roots = {}
        out = {}
        for nid in sorted(self.nodes):
            r = find(nid)
            out[nid] = roots.setdefault(r, len(roots))
        return out

    @property
    def n_components(self):
        return len(set(self.node_component.values())) if self.node_component else 0

    def center(self) -> tuple[float, float]:
        lats = [p[0] for p in self.nodes.values()]
        lons = [p[1] for p in self.nodes.values()]
        return (min(lats) + max(lats)) / 2.0, (min(lons) + max(lons)) / 2.0


def _check_edge_length(e: Edge):
    true_len = polyline_length_m(e.polyline)
    if true_len == 0.0 and e.length_m == 0.0:
        return
    if abs(e.length_m - true_len) > LENGTH_TOLERANCE * max(true_len, 1e-9):
        raise ValueError(
            f"edge {e.id}: declared length {e.length_m:.3f} m differs from "
            f"haversine {true_len:.3f} m by more than 0.1%"
        )


def load_network(path) -> RoadNetwork:
    with open(path) as f:
        data = json.load(f)
    nodes = {int(n["id"]): (float(n["lat"]), float(n["lon"])) for n in data["nodes"]}
    edges = {}
    for raw in data["edges"]:
        poly = [(float(p[0]), float(p[1])) for p in raw["polyline"]]
        if len(poly) < 2:
            raise ValueError(f"edge {raw['id']}: polyline needs >= 2 points")
        length = float(raw["length_m"]) if "length_m" in raw else polyline_length_m(poly)
        e = Edge(
            id=int(raw["id"]),
            frm=int(raw["from"]),
            to=int(raw["to"]),
            polyline=poly,
            length_m=length,
            road_class=raw.get("road_class", ROAD_LOCAL),
            speed_limit_kph=float(raw.get("speed_limit_kph", 40.0)),
        )
        if e.road_class not in ROAD_CLASSES:
            raise ValueError(f"edge {e.id}: unknown road_class '{e.road_class}'")
        if e.frm not in nodes or e.to not in nodes:
            raise ValueError(f"edge {e.id}: endpoint node missing")
        _check_edge_length(e)
        edges[e.id] = e
    return RoadNetwork(nodes=nodes, edges=edges)


def save_network(network: RoadNetwork, path):
    data = {
        "nodes": [
            {"id": nid, "lat": lat, "lon": lon} for nid, (lat, lon) in sorted(network.nodes.items())
        ],
        "edges": [
            {
                "id": e.id,
                "from": e.frm,
                "to": e.to,
                "polyline": [[lat, lon] for lat, lon in e.polyline],
                "length_m": e.length_m,
                "road_class": e.road_class,
                "speed_limit_kph": e.speed_limit_kph,
            }
            for e in sorted(network.edges.values(), key=lambda e: e.id)
        ],
    }
    with open(path, "w") as f:
        json.dump(data, f, indent=1, sort_keys=True)
        f.write("\n")
