"""Adaptive downsampling: full rate near interesting windows, decimated elsewhere.

The interest predicate is evaluated over consecutive windows of width
base_period_s tiling the stream span. Records within burst_radius_s of
any interesting window are kept at full rate; everything else is
decimated to the first record per base period. Output timestamps are
always a subset of input timestamps, in the original order.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence


def adaptive_downsample(
    records: Sequence,
    interest: Callable[[float, float], bool],
    base_period_s: float,
    burst_radius_s: float,
):
    if base_period_s <= 0:
        raise ValueError("base_period_s must be positive")
    records = list(records)
    if not records:
        return []
    t0 = records[0].t
    t_end = records[-1].t
    n_windows = max(1, math.ceil((t_end - t0) / base_period_s))

    # merge interesting windows (plus burst radius) into keep-intervals
    intervals = []
    for w in range(n_windows):
        w0 = t0 + w * base_period_s
        w1 = min(w0 + base_period_s, t_end)
        if interest(w0, w1):
            lo, hi = w0 - burst_radius_s, w1 + burst_radius_s
            if intervals and lo <= intervals[-1][1]:
                intervals[-1] = (intervals[-1][0], max(intervals[-1][1], hi))
            else:
                intervals.append((lo, hi))

    out = []
    seen_bucket = -1
    it = iter(intervals)
    cur = next(it, None)
    for r in records:
        while cur is not None and r.t > cur[1]:
            cur = next(it, None)
        if cur is not None and cur[0] <= r.t <= cur[1]:
            out.append(r)
            # keep decimation phase aligned so post-burst sparse sampling resumes cleanly
            seen_bucket = int((r.t - t0) / base_period_s)
            continue
        bucket = int((r.t - t0) / base_period_s)
        if bucket != seen_bucket:
            out.append(r)
            seen_bucket = bucket
    return out
