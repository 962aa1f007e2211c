"""Reaction-time measurement: stimulus events vs. braking responses.

Stimuli are traffic-light state changes, the front vehicle's taillights
coming on, and pothole strikes. A response is either a brake onset (the
longitudinal channel crossing below the brake-onset level) or an
accelerator pedal release (a sharp falling edge). Stimuli with no
qualifying response within the window become MissedStimulus markers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import Config
from ..records import KIND_FRONT_TAILLIGHT
from ..vision_events import EP_TRAFFIC_LIGHT

STIM_TRAFFIC_LIGHT = "traffic_light"
STIM_TAILLIGHT = "taillight"
STIM_POTHOLE = "pothole"


@dataclass
class ReactionSample:
    stimulus_kind: str
    t_stimulus: float
    latency_s: float
    channel: str  # "brake" | "pedal"


@dataclass
class MissedStimulus:
    stimulus_kind: str
    t_stimulus: float


def extract_stimuli(episodes, raw_vision_events, pothole_events) -> list[tuple[str, float]]:
    """(kind, t) stimulus list from encounter episodes, raw taillight
    detections, and detected pothole events."""
    stimuli: list[tuple[str, float]] = []
    for ep in episodes:
        if ep.kind != EP_TRAFFIC_LIGHT:
            continue
        seq = ep.attrs.get("light_state_sequence", [])
        for (prev_t, prev_s), (cur_t, cur_s) in zip(seq[:-1], seq[1:]):
            if prev_s != cur_s and {prev_s, cur_s} <= {"red", "green"}:
                stimuli.append((STIM_TRAFFIC_LIGHT, float(cur_t)))
    tl = sorted(
        (e for e in raw_vision_events if e.kind == KIND_FRONT_TAILLIGHT), key=lambda e: e.t
    )
    for prev, cur in zip(tl[:-1], tl[1:]):
        if prev.attrs.get("state") == "off" and cur.attrs.get("state") == "on":
            stimuli.append((STIM_TAILLIGHT, float(cur.t)))
    for ev in pothole_events:
        stimuli.append((STIM_POTHOLE, float(ev.t_start)))
    stimuli.sort(key=lambda s: s[1])
    return stimuli


def _brake_onsets(accel_t, a_long, onset_level: float) -> np.ndarray:
    a = np.asarray(a_long, dtype=float)
    cross = (a[1:] <= onset_level) & (a[:-1] > onset_level)
    return np.asarray(accel_t)[1:][cross]


def _pedal_releases(pedal_t, pedal_pct, drop_pct: float) -> np.ndarray:
    p = np.asarray(pedal_pct, dtype=float)
    falling = (p[:-1] - p[1:]) >= drop_pct
    return np.asarray(pedal_t)[1:][falling]


def reaction_time(
    stimuli,
    accel=None,
    pedal_t=None,
    pedal_pct=None,
    max_window_s: float | None = None,
    cfg: Config | None = None,
):
    """Latency of the first qualifying response to each stimulus.

    Returns (samples, missed). Either response channel may be absent;
    the index still works off the other.
    """
    cfg = cfg or Config()
    window = max_window_s if max_window_s is not None else cfg.reaction_max_window_s
    responses = []
    if accel is not None and len(accel.t) > 1:
        for t in _brake_onsets(accel.t, accel.a_long, cfg.reaction_brake_accel):
            responses.append((float(t), "brake"))
    if pedal_t is not None and pedal_pct is not None and len(pedal_t) > 1:
        for t in _pedal_releases(pedal_t, pedal_pct, cfg.reaction_pedal_drop_pct):
            responses.append((float(t), "pedal"))
    responses.sort()
    resp_t = np.array([r[0] for r in responses]) if responses else np.empty(0)

    samples: list[ReactionSample] = []
    missed: list[MissedStimulus] = []
    for kind, t_stim in stimuli:
        i = int(np.searchsorted(resp_t, t_stim, side="right"))
        if i < len(resp_t) and resp_t[i] - t_stim <= window:
            samples.append(
                ReactionSample(kind, t_stim, float(resp_t[i] - t_stim), responses[i][1])
            )
        else:
            missed.append(MissedStimulus(kind, t_stim))
    return samples, missed
