"""Traffic signal and stop sign compliance from encounters plus speed."""

from __future__ import annotations

import numpy as np

from ..config import Config
from ..vision_events import EP_STOP_SIGN, EP_TRAFFIC_LIGHT
from .events import DetectedEvent, severity_for


def _speed_arrays(speed_records):
    t = np.array([r.t for r in speed_records])
    v = np.array([r.value for r in speed_records]) / 3.6  # m/s
    return t, v


def _advance_crossing(t, v, t0, t1, threshold_m):
    """Time at which distance traveled since t0 (within [t0, t1]) exceeds
    threshold_m, or None."""
    sel = (t >= t0) & (t <= t1)
    if sel.sum() < 2:
        return None
    ts = t[sel]
    vs = v[sel]
    seg = (vs[:-1] + vs[1:]) / 2.0 * np.diff(ts)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    over = np.nonzero(cum > threshold_m)[0]
    if len(over) == 0:
        return None
    return float(ts[over[0]])


def signal_compliance(encounters, speed_records, cfg: Config | None = None) -> list[DetectedEvent]:
    """RedLightRun / StopSignViolation events.

    A red-light run is the vehicle advancing beyond the advance threshold
    while the encounter's held light state is red. A stop-sign violation
    is never slowing below the compliance speed within the window after
    the encounter opens.
    """
    cfg = cfg or Config()
    t, v = _speed_arrays(speed_records)
    events: list[DetectedEvent] = []
    if len(t) < 2:
        return events
    for enc in encounters:
        if enc.kind == EP_TRAFFIC_LIGHT:
            seq = list(enc.attrs.get("light_state_sequence", []))
            for i, (ts, state) in enumerate(seq):
                if state != "red":
                    continue
                t_next = seq[i + 1][0] if i + 1 < len(seq) else enc.t_end
                t_cross = _advance_crossing(t, v, ts, t_next, cfg.redlight_advance_m)
                if t_cross is not None:
                    events.append(
                        DetectedEvent(
                            "RedLightRun",
                            t_cross,
                            t_cross,
                            severity=severity_for("RedLightRun"),
                            attrs={"advance_m": cfg.redlight_advance_m, "red_onset": ts},
                        )
                    )
                    break  # one violation per encounter
        elif enc.kind == EP_STOP_SIGN:
            sel = (t >= enc.t_start) & (t <= enc.t_start + cfg.stopsign_window_s)
            if not sel.any():
                continue
            vmin_kph = float(v[sel].min() * 3.6)
            if vmin_kph > cfg.stopsign_speed_kph:
                events.append(
                    DetectedEvent(
                        "StopSignViolation",
                        enc.t_start,
                        enc.t_start,
                        severity=severity_for("StopSignViolation"),
                        attrs={"min_speed_kph": vmin_kph},
                    )
                )
    return events
