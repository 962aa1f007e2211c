"""Lane deviation from matched lateral offsets.

Only RTK-quality fixes support lane-level claims; with plain GPS the
series is marked unreliable and no events are emitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..config import Config
from ..records import FixQuality

RTK_QUALITIES = (FixQuality.RTK_FIXED, FixQuality.RTK_FLOAT)


@dataclass
class LaneDeviationEvent:
    t_start: float
    t_end: float
    max_abs_lateral_m: float


@dataclass
class LaneDeviationResult:
    times: list[float]
    lateral_m: list[float]
    reliable: bool
    events: list[LaneDeviationEvent] = field(default_factory=list)


def lane_deviation(matched, fixes, cfg: Config | None = None) -> LaneDeviationResult:
    cfg = cfg or Config()
    times, laterals, rtk = [], [], []
    for a in matched.assignments:
        f = fixes[a.fix_index]
        times.append(f.t)
        laterals.append(a.lateral_m)
        rtk.append(f.fix_quality in RTK_QUALITIES)
    reliable = bool(rtk) and all(rtk)

    events: list[LaneDeviationEvent] = []
    if reliable:
        run_start = None
        run_peak = 0.0
        last_t = None
        for t, lat, ok in zip(times, laterals, rtk):
            exceed = ok and abs(lat) > cfg.lane_half_width_m
            if exceed:
                if run_start is None:
                    run_start = t
                    run_peak = abs(lat)
                else:
                    run_peak = max(run_peak, abs(lat))
                last_t = t
            elif run_start is not None:
                if last_t - run_start >= cfg.lane_dev_min_duration_s:
                    events.append(LaneDeviationEvent(run_start, last_t, run_peak))
                run_start = None
        if run_start is not None and last_t is not None and last_t - run_start >= cfg.lane_dev_min_duration_s:
            events.append(LaneDeviationEvent(run_start, last_t, run_peak))
    return LaneDeviationResult(times, laterals, reliable, events)
