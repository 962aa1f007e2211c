"""Braking-pattern annotation: did the driver's gaze leave the road just
before each harsh brake?"""

from __future__ import annotations

from ..config import Config
from ..errors import EmptyStream
from ..vision_events import _state_steps


def annotate_braking(brakes, distraction_episodes, eye_events, cfg: Config | None = None):
    """Returns [(brake, gaze_offroad)] where gaze_offroad means a
    distraction episode or eyes-closed stretch overlapped the lookback
    window before brake onset."""
    cfg = cfg or Config()
    lookback = cfg.gaze_lookback_s
    closed_intervals = []
    try:
        knots, closed, t_end = _state_steps(eye_events)
        start = None
        for i in range(len(knots)):
            if closed[i] and start is None:
                start = knots[i]
            elif not closed[i] and start is not None:
                closed_intervals.append((start, knots[i]))
                start = None
        if start is not None:
            closed_intervals.append((start, t_end))
    except EmptyStream:
        pass

    windows = [(ep.t_start, ep.t_end) for ep in distraction_episodes] + closed_intervals
    out = []
    for b in brakes:
        lo, hi = b.t_start - lookback, b.t_start
        offroad = any(a <= hi and bnd >= lo for a, bnd in windows)
        out.append((b, bool(offroad)))
    return out
