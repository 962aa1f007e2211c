"""Travel-pattern statistics: miles split by highway, night, and severe
weather. Categories are independent (a mile can be both night and
highway) and each is at most the total."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..config import Config
from ..geo import haversine_arrays
from ..mapmatch.network import ROAD_HIGHWAY

METERS_PER_MILE = 1609.344

SEVERE_CONDITIONS = frozenset({"SevereRain", "Fog"})
CONDITIONS = ("Clear", "Rain", "SevereRain", "Fog")


@dataclass
class WeatherRecord:
    t_start: float
    t_end: float
    bbox: tuple  # (lat_min, lon_min, lat_max, lon_max)
    condition: str

    def covers(self, t, lat, lon):
        la0, lo0, la1, lo1 = self.bbox
        return (self.t_start <= t <= self.t_end) and (la0 <= lat <= la1) and (lo0 <= lon <= lo1)


def load_weather(path) -> list[WeatherRecord]:
    with open(path) as f:
        data = json.load(f)
    out = []
    for r in data:
        if r["condition"] not in CONDITIONS:
            raise ValueError(f"unknown weather condition '{r['condition']}'")
        if r["t_end"] <= r["t_start"]:
            raise ValueError("weather record with t_end <= t_start")
        out.append(WeatherRecord(float(r["t_start"]), float(r["t_end"]), tuple(r["bbox"]), r["condition"]))
    return out


@dataclass
class TravelStats:
    miles: float = 0.0
    highway_miles: float = 0.0
    night_miles: float = 0.0
    severe_weather_miles: float = 0.0

    def add(self, other: "TravelStats"):
        self.miles += other.miles
        self.highway_miles += other.highway_miles
        self.night_miles += other.night_miles
        self.severe_weather_miles += other.severe_weather_miles


def _parse_hhmm(s: str) -> float:
    h, m = s.split(":")
    return int(h) * 3600.0 + int(m) * 60.0


def _in_night_window(second_of_day, start_s: float, end_s: float):
    if start_s <= end_s:
        return (second_of_day >= start_s) & (second_of_day < end_s)
    return (second_of_day >= start_s) | (second_of_day < end_s)


def travel_pattern(
    fixes,
    matched,
    network,
    weather: list[WeatherRecord],
    epoch_unix: float,
    cfg: Config | None = None,
) -> TravelStats:
    """Per-trip mile partition. fixes: synchronized positioned GnssFix
    list; matched: MatchedPath or None (no highway split without it)."""
    cfg = cfg or Config()
    pos = [(i, f) for i, f in enumerate(fixes) if f.has_position]
    if len(pos) < 2:
        return TravelStats()
    t = np.array([f.t for _, f in pos])
    lat = np.array([f.lat for _, f in pos])
    lon = np.array([f.lon for _, f in pos])
    d = haversine_arrays(lat[:-1], lon[:-1], lat[1:], lon[1:])  # attributed to the later fix

    highway_fix = np.zeros(len(pos), dtype=bool)
    if matched is not None:
        by_fix = {a.fix_index: a.edge_id for a in matched.assignments}
        for j, (i, _f) in enumerate(pos):
            eid = by_fix.get(i)
            if eid is not None and network.edges[eid].road_class == ROAD_HIGHWAY:
                highway_fix[j] = True

    night_start = _parse_hhmm(cfg.night_start)
    night_end = _parse_hhmm(cfg.night_end)
    local = (epoch_unix + t + cfg.tz_offset_hours * 3600.0) % 86400.0
    night_fix = _in_night_window(local, night_start, night_end)

    severe_fix = np.zeros(len(pos), dtype=bool)
    severe_records = [w for w in weather if w.condition in SEVERE_CONDITIONS]
    for j, (_i, f) in enumerate(pos):
        for w in severe_records:
            if w.covers(f.t, f.lat, f.lon):
                severe_fix[j] = True
                break

    total = float(d.sum())
    return TravelStats(
        miles=total / METERS_PER_MILE,
        highway_miles=float(d[highway_fix[1:]].sum()) / METERS_PER_MILE,
        night_miles=float(d[night_fix[1:]].sum()) / METERS_PER_MILE,
        severe_weather_miles=float(d[severe_fix[1:]].sum()) / METERS_PER_MILE,
    )
