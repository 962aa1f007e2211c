"""Geodesy primitives: haversine distances and a local tangent projection.

Lengths and trip distances use the haversine great-circle formula. For
point-to-edge geometry (spatial queries, lateral offsets) everything is
projected once onto a local equirectangular plane around the network
center — exact enough below ~50 km extents and keeps the math linear.
"""

from __future__ import annotations

import math

import numpy as np

EARTH_RADIUS_M = 6_371_000.0


def haversine(p1, p2) -> float:
    """Great-circle distance in meters between (lat, lon) points in degrees."""
    lat1, lon1 = math.radians(p1[0]), math.radians(p1[1])
    lat2, lon2 = math.radians(p2[0]), math.radians(p2[1])
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    a = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(a)))


def haversine_arrays(lat1, lon1, lat2, lon2) -> np.ndarray:
    """Vectorized haversine over degree arrays."""
    lat1, lon1, lat2, lon2 = (np.radians(np.asarray(v, dtype=float)) for v in (lat1, lon1, lat2, lon2))
    a = np.sin((lat2 - lat1) / 2) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin((lon2 - lon1) / 2) ** 2
    return 2.0 * EARTH_RADIUS_M * np.arcsin(np.minimum(1.0, np.sqrt(a)))


def polyline_length_m(points) -> float:
    """Sum of haversine segment lengths along a [(lat, lon), ...] polyline."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return 0.0
    return float(np.sum(haversine_arrays(pts[:-1, 0], pts[:-1, 1], pts[1:, 0], pts[1:, 1])))


class LocalProjection:
    """Equirectangular projection: x east, y north, meters from a reference."""

    def __init__(self, lat0: float, lon0: float):
        self.lat0 = lat0
        self.lon0 = lon0
        self._coslat = math.cos(math.radians(lat0))
        self._m_per_deg = EARTH_RADIUS_M * math.pi / 180.0

    def to_xy(self, lat, lon):
        lat = np.asarray(lat, dtype=float)
        lon = np.asarray(lon, dtype=float)
        x = (lon - self.lon0) * self._m_per_deg * self._coslat
        y = (lat - self.lat0) * self._m_per_deg
        return x, y

    def to_latlon(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        lat = self.lat0 + y / self._m_per_deg
        lon = self.lon0 + x / (self._m_per_deg * self._coslat)
        return lat, lon


def point_segment_distance(px, py, x1, y1, x2, y2):
    """Distance from point(s) to segment(s) in the plane.

    Broadcasts over arrays; returns (distance, t) where t in [0, 1] is the
    normalized position of the closest point along the segment.
    """
    px, py, x1, y1, x2, y2 = (np.asarray(v, dtype=float) for v in (px, py, x1, y1, x2, y2))
    dx = x2 - x1
    dy = y2 - y1
    seg_len2 = dx * dx + dy * dy
    t = np.where(seg_len2 > 0, ((px - x1) * dx + (py - y1) * dy) / np.where(seg_len2 > 0, seg_len2, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    cx = x1 + t * dx
    cy = y1 + t * dy
    return np.hypot(px - cx, py - cy), t
