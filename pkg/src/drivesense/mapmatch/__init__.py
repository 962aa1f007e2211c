"""Road network graph, spatial index, map matching, and path analytics."""

from .network import Edge, RoadNetwork, load_network, save_network, ROAD_HIGHWAY, ROAD_ARTERIAL, ROAD_LOCAL
from .spatial import EdgeHit, SpatialIndex, nearest_edges, nearest_edges_batch
from .routing import DistanceCache, detour_ratio, shortest_path, DetourResult
from .hmm import FixAssignment, MatchedPath, match_trajectory
from .lane import LaneDeviationEvent, LaneDeviationResult, lane_deviation

__all__ = [
    "Edge",
    "RoadNetwork",
    "load_network",
    "save_network",
    "ROAD_HIGHWAY",
    "ROAD_ARTERIAL",
    "ROAD_LOCAL",
    "SpatialIndex",
    "EdgeHit",
    "nearest_edges",
    "nearest_edges_batch",
    "shortest_path",
    "DistanceCache",
    "detour_ratio",
    "DetourResult",
    "match_trajectory",
    "MatchedPath",
    "FixAssignment",
    "lane_deviation",
    "LaneDeviationResult",
    "LaneDeviationEvent",
]
