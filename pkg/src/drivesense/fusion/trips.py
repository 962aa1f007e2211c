"""Trip segmentation from the synchronized speed channel."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..config import Config
from ..geo import haversine_arrays
from ..records import OBD_SPEED_KPH


@dataclass
class Trip:
    t_start: float
    t_end: float
    distance_m: float
    trip_id: str = ""
    driver_id: str = ""
    n_fixes: int = 0
    events: list = field(default_factory=list)
    matched_ref: Optional[str] = None


def _speed_series(obd_records):
    pts = [(r.t, r.value) for r in obd_records if getattr(r, "quantity", None) == OBD_SPEED_KPH]
    t = np.array([p[0] for p in pts])
    v = np.array([p[1] for p in pts])
    return t, v


def segment_trips(gnss_stream, obd_speed_stream, cfg: Config | None = None) -> list[Trip]:
    """A trip starts when speed stays above the start threshold for the
    sustain window, and ends at the onset of a long enough quiet period
    (or at stream end)."""
    cfg = cfg or Config()
    t, v = _speed_series(obd_speed_stream.records)
    if len(t) == 0:
        return []
    fixes = [f for f in gnss_stream.records if f.has_position]
    fix_t = np.array([f.t for f in fixes])
    fix_lat = np.array([f.lat for f in fixes])
    fix_lon = np.array([f.lon for f in fixes])

    trips: list[Trip] = []
    n = len(t)
    i = 0
    while i < n:
        # find a start: sustained movement
        while i < n and v[i] <= cfg.trip_start_speed_kph:
            i += 1
        if i >= n:
            break
        j = i
        while j < n and v[j] > cfg.trip_start_speed_kph:
            j += 1
        if t[min(j, n - 1)] - t[i] < cfg.trip_start_sustain_s and j < n:
            i = j + 1
            continue
        t_start = t[i]
        # find the end: onset of a sustained stop
        k = j
        t_end = t[-1]
        while k < n:
            while k < n and v[k] >= cfg.trip_end_speed_kph:
                k += 1
            if k >= n:
                break
            m = k
            while m < n and v[m] < cfg.trip_end_speed_kph:
                m += 1
            quiet_span = (t[m - 1] if m <= n else t[-1]) - t[k]
            if m >= n:
                # stream ends inside the quiet run
                if quiet_span >= cfg.trip_end_sustain_s:
                    t_end = t[k]
                break
            if t[m] - t[k] >= cfg.trip_end_sustain_s:
                t_end = t[k]
                break
            k = m
        sel = (fix_t >= t_start) & (fix_t <= t_end)
        dist = 0.0
        nf = int(sel.sum())
        if nf >= 2:
            la, lo = fix_lat[sel], fix_lon[sel]
            dist = float(np.sum(haversine_arrays(la[:-1], lo[:-1], la[1:], lo[1:])))
        trips.append(Trip(t_start=float(t_start), t_end=float(t_end), distance_m=dist, n_fixes=nf))
        # resume scanning after the stop that ended this trip
        i = int(np.searchsorted(t, t_end)) + 1
    return trips
