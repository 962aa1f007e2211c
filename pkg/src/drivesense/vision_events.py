"""Episodic behavioral measures from per-frame camera detections.

Raw detections arrive at frame rate; these operations debounce them into
episodes (eyes-closed stretches, look-away distraction, yawns, lane
crossings, near-collisions, per-encounter sign/light groupings) and
compute PERCLOS, the standard eye-closure drowsiness proxy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import Config
from .errors import EmptyStream
from .records import (
    KIND_EYE_STATE,
    KIND_HEAD_POSE,
    KIND_LANE_CROSSING,
    KIND_NEAR_COLLISION,
    KIND_PEDESTRIAN,
    KIND_PHONE_USE,
    KIND_SMOKING,
    KIND_STOP_SIGN,
    KIND_TRAFFIC_LIGHT,
    KIND_YAWN,
)

EP_EYES_CLOSED = "EyesClosedEpisode"
EP_YAWN = "YawnEpisode"
EP_DISTRACTION = "DistractionEpisode"
EP_PHONE_USE = "PhoneUseEpisode"
EP_SMOKING = "SmokingEpisode"
EP_LANE_CROSSING = "LaneCrossingEvent"
EP_NEAR_COLLISION = "NearCollisionEvent"
EP_STOP_SIGN = "StopSignEncounter"
EP_TRAFFIC_LIGHT = "TrafficLightEncounter"
EP_PEDESTRIAN = "PedestrianEncounter"


@dataclass
class EpisodicEvent:
    kind: str
    t_start: float
    t_end: float
    attrs: dict = field(default_factory=dict)

    @property
    def duration_s(self):
        return self.t_end - self.t_start


def _state_steps(events, closed_value="closed"):
    """Sample-and-hold step function from eye_state events.

    Returns (knots, closed_flags, t_end): state closed_flags[i] holds over
    [knots[i], knots[i+1]); the final state holds for one nominal period.
    """
    evs = sorted(((e.t, e.attrs.get("state")) for e in events), key=lambda x: x[0])
    if not evs:
        raise EmptyStream("no eye-state events")
    knots = np.array([t for t, _ in evs])
    closed = np.array([1.0 if s == closed_value else 0.0 for _, s in evs])
    if len(knots) > 1:
        hold = float(np.median(np.diff(knots)))
    else:
        hold = 1.0
    t_end = float(knots[-1] + hold)
    return knots, closed, t_end


def _closed_time_integral(knots, closed, t_end):
    """Cumulative closed-time C(tau) as interpolation knots (times, values)."""
    times = np.append(knots, t_end)
    seg = np.diff(times) * closed
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    return times, cum


def perclos(eye_events, window_s: float, cfg: Config | None = None):
    """Sliding-window fraction of time the eyes are closed.

    Returns (times, fractions): one sample per eye event plus a final
    sample at the stream end; each value covers the trailing window
    clipped to the stream start.
    """
    if window_s <= 0:
        raise ValueError("window_s must be positive")
    knots, closed, t_end = _state_steps(eye_events)
    times, cum = _closed_time_integral(knots, closed, t_end)
    eval_t = np.append(knots, t_end)
    out = np.zeros(len(eval_t))
    t0 = knots[0]
    for i, tau in enumerate(eval_t):
        lo = max(t0, tau - window_s)
        denom = tau - lo
        if denom <= 0:
            out[i] = closed[0]
        else:
            c = np.interp(tau, times, cum) - np.interp(lo, times, cum)
            out[i] = c / denom
    return eval_t, np.clip(out, 0.0, 1.0)


def eyes_closed_episodes(eye_events, min_duration_s: float = 0.5) -> list[EpisodicEvent]:
    """Debounced closed-eyes stretches (blinks fall under min_duration_s)."""
    knots, closed, t_end = _state_steps(eye_events)
    episodes = []
    start = None
    for i in range(len(knots)):
        if closed[i] and start is None:
            start = knots[i]
        elif not closed[i] and start is not None:
            if knots[i] - start >= min_duration_s:
                episodes.append(EpisodicEvent(EP_EYES_CLOSED, float(start), float(knots[i])))
            start = None
    if start is not None and t_end - start >= min_duration_s:
        episodes.append(EpisodicEvent(EP_EYES_CLOSED, float(start), float(t_end)))
    return episodes


def _wrap_deg(a):
    return (np.asarray(a, dtype=float) + 180.0) % 360.0 - 180.0


def circular_median_deg(angles) -> float:
    """Median direction: recenter around the circular mean, then take the
    ordinary median of the wrapped residuals."""
    a = np.radians(np.asarray(angles, dtype=float))
    if len(a) == 0:
        raise EmptyStream("no angles")
    mean = math.atan2(float(np.sin(a).sum()), float(np.cos(a).sum()))
    resid = _wrap_deg(np.degrees(a - mean))
    return float(_wrap_deg(math.degrees(mean) + float(np.median(resid))))


def detect_distraction(
    head_poses,
    yaw_thresh_deg: float | None = None,
    min_duration_s: float | None = None,
    mounting_yaw_deg: float | None = None,
    cfg: Config | None = None,
) -> list[EpisodicEvent]:
    """Look-away episodes from head yaw.

    The camera's mounting yaw (it rarely faces the driver dead-on) is
    calibrated as the circular median of the first 60 s of yaw samples
    unless given explicitly; excursions beyond yaw_thresh_deg sustained
    for min_duration_s become DistractionEpisodes.
    """
    cfg = cfg or Config()
    yaw_thresh_deg = yaw_thresh_deg if yaw_thresh_deg is not None else cfg.distraction_yaw_deg
    min_duration_s = min_duration_s if min_duration_s is not None else cfg.distraction_min_duration_s
    poses = sorted(((e.t, float(e.attrs["yaw_deg"])) for e in head_poses), key=lambda x: x[0])
    if not poses:
        return []
    t = np.array([p[0] for p in poses])
    yaw = np.array([p[1] for p in poses])
    if mounting_yaw_deg is None:
        calib = yaw[t <= t[0] + cfg.mounting_yaw_calib_s]
        mounting_yaw_deg = circular_median_deg(calib)
    dev = np.abs(_wrap_deg(yaw - mounting_yaw_deg))
    exceed = dev > yaw_thresh_deg

    runs = []
    i = 0
    while i < len(exceed):
        if exceed[i]:
            j = i
            while j + 1 < len(exceed) and exceed[j + 1]:
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1
    merged = []
    for r in runs:
        if merged and t[r[0]] - t[merged[-1][1]] < cfg.distraction_merge_gap_s:
            merged[-1] = (merged[-1][0], r[1])
        else:
            merged.append(r)
    episodes = []
    for i0, i1 in merged:
        if t[i1] - t[i0] >= min_duration_s:
            episodes.append(
                EpisodicEvent(
                    EP_DISTRACTION,
                    float(t[i0]),
                    float(t[i1]),
                    {"max_yaw_deg": float(dev[i0 : i1 + 1].max()), "mounting_yaw_deg": mounting_yaw_deg},
                )
            )
    return episodes


def detect_yawning(
    eye_events,
    mouth_events,
    min_duration_s: float | None = None,
    closed_fraction: float | None = None,
    max_gap_s: float = 0.6,
    cfg: Config | None = None,
) -> list[EpisodicEvent]:
    """Yawns: sustained open-mouth detection runs during which the eyes
    are closed at least half the time.

    mouth_events are the frame-level wide-open-mouth detections (kind
    "yawn"); speech-length openings fall under min_duration_s.
    """
    cfg = cfg or Config()
    min_duration_s = min_duration_s if min_duration_s is not None else cfg.yawn_min_duration_s
    closed_fraction = closed_fraction if closed_fraction is not None else cfg.yawn_closed_fraction
    mouth_t = sorted(e.t for e in mouth_events)
    if not mouth_t:
        return []
    runs = []
    start = prev = mouth_t[0]
    for tt in mouth_t[1:]:
        if tt - prev > max_gap_s:
            runs.append((start, prev))
            start = tt
        prev = tt
    runs.append((start, prev))

    try:
        knots, closed, t_end = _state_steps(eye_events)
        times, cum = _closed_time_integral(knots, closed, t_end)
    except EmptyStream:
        times, cum = None, None

    episodes = []
    for (a, b) in runs:
        if b - a < min_duration_s:
            continue
        if times is None:
            frac = 0.0
        else:
            c = np.interp(b, times, cum) - np.interp(a, times, cum)
            frac = c / (b - a)
        if frac >= closed_fraction:
            episodes.append(EpisodicEvent(EP_YAWN, float(a), float(b), {"eyes_closed_fraction": float(frac)}))
    return episodes


def _group_by_gap(times, gap_s):
    groups = []
    for i, tt in enumerate(times):
        if groups and tt - times[groups[-1][-1]] <= gap_s:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def episodic_counts(events, cfg: Config | None = None) -> list[EpisodicEvent]:
    """Debounce raw front-camera detections (plus driver-camera phone and
    smoking flags) into per-encounter episodes."""
    cfg = cfg or Config()
    by_kind: dict[str, list] = {}
    for e in sorted(events, key=lambda e: e.t):
        by_kind.setdefault(e.kind, []).append(e)
    out: list[EpisodicEvent] = []

    for e_list, gap, ep_kind in (
        (by_kind.get(KIND_LANE_CROSSING, []), cfg.lane_crossing_merge_s, EP_LANE_CROSSING),
        (by_kind.get(KIND_PHONE_USE, []), cfg.encounter_gap_s, EP_PHONE_USE),
        (by_kind.get(KIND_SMOKING, []), cfg.encounter_gap_s, EP_SMOKING),
        (by_kind.get(KIND_STOP_SIGN, []), cfg.encounter_gap_s, EP_STOP_SIGN),
        (by_kind.get(KIND_PEDESTRIAN, []), cfg.encounter_gap_s, EP_PEDESTRIAN),
    ):
        if not e_list:
            continue
        times = [e.t for e in e_list]
        for g in _group_by_gap(times, gap):
            attrs = {"n_detections": len(g)}
            if ep_kind == EP_PEDESTRIAN:
                attrs["any_crossing"] = any(bool(e_list[i].attrs.get("crossing")) for i in g)
            out.append(EpisodicEvent(ep_kind, times[g[0]], times[g[-1]], attrs))

    lights = by_kind.get(KIND_TRAFFIC_LIGHT, [])
    if lights:
        times = [e.t for e in lights]
        for g in _group_by_gap(times, cfg.encounter_gap_s):
            seq = []
            for i in g:
                state = lights[i].attrs.get("state")
                if not seq or seq[-1][1] != state:
                    seq.append((lights[i].t, state))
            out.append(
                EpisodicEvent(
                    EP_TRAFFIC_LIGHT, times[g[0]], times[g[-1]], {"light_state_sequence": seq}
                )
            )

    collisions = by_kind.get(KIND_NEAR_COLLISION, [])
    if collisions:
        close_dets = [e for e in collisions if e.attrs.get("distance_m", 1e9) < cfg.near_collision_distance_m]
        times = [e.t for e in close_dets]
        for g in _group_by_gap(times, cfg.lane_crossing_merge_s):
            dmin = min(close_dets[i].attrs["distance_m"] for i in g)
            out.append(
                EpisodicEvent(
                    EP_NEAR_COLLISION, times[g[0]], times[g[-1]], {"min_distance_m": float(dmin)}
                )
            )

    out.sort(key=lambda e: (e.t_start, e.kind))
    return out
