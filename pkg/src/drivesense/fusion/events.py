"""The shared detected-event envelope: kind, time span, location, severity.

Motion events, vision episodes, and fusion-level findings (red-light
runs, getting lost, reaction samples) all flatten into this one record
for the events.jsonl output and the DBI counters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class DetectedEvent:
    kind: str
    t_start: float
    t_end: float
    severity: int = 1
    lat: Optional[float] = None
    lon: Optional[float] = None
    attrs: dict = field(default_factory=dict)

    @property
    def duration_s(self):
        return self.t_end - self.t_start

    def to_json(self) -> str:
        obj = {
            "kind": self.kind,
            "t_start": self.t_start,
            "t_end": self.t_end,
            "duration_s": self.duration_s,
            "severity": self.severity,
            "lat": self.lat,
            "lon": self.lon,
        }
        obj.update(self.attrs)
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "DetectedEvent":
        obj = json.loads(line)
        known = {"kind", "t_start", "t_end", "duration_s", "severity", "lat", "lon"}
        return cls(
            kind=obj["kind"],
            t_start=obj["t_start"],
            t_end=obj["t_end"],
            severity=obj.get("severity", 1),
            lat=obj.get("lat"),
            lon=obj.get("lon"),
            attrs={k: v for k, v in obj.items() if k not in known},
        )


def severity_for(kind: str, peak: float = 0.0, duration_s: float = 0.0, min_distance_m: float = None) -> int:
    """Ordinal 1-3 severity from event magnitude (fixed mapping)."""
    if kind in ("HarshBrake", "HarshAccel", "HarshCorner"):
        mag = abs(peak)
        return 3 if mag >= 6.0 else (2 if mag >= 4.5 else 1)
    if kind == "Pothole":
        mag = abs(peak)
        return 3 if mag >= 20.0 else (2 if mag >= 10.0 else 1)
    if kind == "NearCollisionEvent":
        d = min_distance_m if min_distance_m is not None else 10.0
        return 3 if d < 3.0 else (2 if d < 5.0 else 1)
    if kind == "RedLightRun":
        return 3
    if kind in ("StopSignViolation", "GettingLost"):
        return 2
    if kind in ("DistractionEpisode", "EyesClosedEpisode"):
        return 2 if duration_s >= 5.0 else 1
    return 1


def locate_events(events: list[DetectedEvent], fixes, window_s: float = 1.0) -> None:
    """Attach the nearest positioned fix within window_s to each event
    (in place). Events with no nearby fix keep location None."""
    pts = [(f.t, f.lat, f.lon) for f in fixes if f.has_position]
    if not pts:
        return
    arr = np.asarray(pts, dtype=float)
    times = arr[:, 0]
    for ev in events:
        i = int(np.searchsorted(times, ev.t_start))
        best = None
        for j in (i - 1, i):
            if 0 <= j < len(times) and abs(times[j] - ev.t_start) <= window_s:
                if best is None or abs(times[j] - ev.t_start) < abs(times[best] - ev.t_start):
                    best = j
        if best is not None:
            ev.lat = float(arr[best, 1])
            ev.lon = float(arr[best, 2])
