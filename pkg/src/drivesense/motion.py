"""Telematics event layer: harsh maneuvers and pavement impacts from IMU.

gravity_align rotates raw accelerometer data into the vehicle frame
(forward/left/up, gravity removed) using a low-passed gravity estimate
and either a configured mounting yaw or the correlation of horizontal
acceleration with d(speed)/dt. detect_harsh_events and detect_potholes
then run threshold/hysteresis logic on the aligned channels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .config import Config
from .errors import NoOverlap, NoQuiescentPeriod, TooFewSamples
from .geo import haversine_arrays
from .records import ImuStream
from .timesync import SyncedStream

GRAVITY_MS2 = 9.80665

KIND_HARSH_ACCEL = "HarshAccel"
KIND_HARSH_BRAKE = "HarshBrake"
KIND_HARSH_CORNER = "HarshCorner"
KIND_POTHOLE = "Pothole"


@dataclass
class VehicleFrameAccel:
    """Gravity-free acceleration in the vehicle frame (+long forward,
    +lat left, +vert up)."""

    t: np.ndarray
    a_long: np.ndarray
    a_lat: np.ndarray
    a_vert: np.ndarray

    def __len__(self):
        return len(self.t)


@dataclass
class MotionEvent:
    kind: str
    t_start: float
    t_end: float
    peak: float
    duration_s: float


def _lowpass(x: np.ndarray, fs: float, cutoff_hz: float) -> np.ndarray:
    nyq = fs / 2.0
    if cutoff_hz >= nyq:
        return x.copy()
    b, a = signal.butter(2, cutoff_hz / nyq)
    return signal.filtfilt(b, a, x, axis=0)


def _highpass(x: np.ndarray, fs: float, cutoff_hz: float) -> np.ndarray:
    nyq = fs / 2.0
    if cutoff_hz >= nyq:
        return np.zeros_like(x)
    b, a = signal.butter(2, cutoff_hz / nyq, btype="highpass")
    return signal.filtfilt(b, a, x, axis=0)


def _uniform_imu(imu: ImuStream):
    """Resample onto a uniform grid at the median rate (filters need it)."""
    t = imu.t
    if len(t) < 3:
        raise TooFewSamples("need >= 3 IMU samples")
    dt = float(np.median(np.diff(t)))
    if dt <= 0:
        raise ValueError("non-increasing IMU timestamps")
    n = int(np.floor((t[-1] - t[0]) / dt)) + 1
    grid = t[0] + np.arange(n) * dt
    accel = np.column_stack([np.interp(grid, t, imu.accel[:, j]) for j in range(3)])
    return grid, accel, 1.0 / dt


def gravity_align(
    imu_stream: SyncedStream,
    mounting_yaw_deg: float | None = None,
    speed_times: np.ndarray | None = None,
    speed_mps: np.ndarray | None = None,
    cfg: Config | None = None,
) -> VehicleFrameAccel:
    """Rotate IMU acceleration into the gravity-free vehicle frame.

    Needs >= 5 s of data containing low-dynamics stretches to estimate
    the gravity direction. The forward axis comes from mounting_yaw_deg
    (degrees from the sensor x axis, in the horizontal plane) or, when a
    speed channel is supplied, from correlating horizontal acceleration
    with d(speed)/dt.
    """
    cfg = cfg or Config()
    imu: ImuStream = imu_stream.records if isinstance(imu_stream, SyncedStream) else imu_stream
    t, accel, fs = _uniform_imu(imu)
    if t[-1] - t[0] < 5.0:
        raise TooFewSamples("need >= 5 s of IMU data")

    g_est = _lowpass(accel, fs, cfg.gravity_lowpass_hz)
    hf = accel - g_est
    win = max(1, int(round(fs)))
    kernel = np.ones(win) / win
    hf_rms = np.sqrt(np.convolve((hf**2).sum(axis=1), kernel, mode="same"))
    quiet = hf_rms < cfg.quiescent_rms_ms2
    if not quiet.any():
        raise NoQuiescentPeriod("no low-dynamics stretch to estimate gravity")

    g_vec = g_est[quiet].mean(axis=0)
    g_mag = float(np.linalg.norm(g_vec))
    if g_mag < 5.0:
        raise NoQuiescentPeriod("gravity estimate implausibly small")
    up = g_vec / g_mag

    dyn = accel - g_vec
    a_vert = dyn @ up

    # horizontal basis
    seed = np.array([1.0, 0.0, 0.0])
    if abs(seed @ up) > 0.9:
        seed = np.array([0.0, 1.0, 0.0])
    e1 = seed - (seed @ up) * up
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(up, e1)
    h1 = dyn @ e1
    h2 = dyn @ e2

    f1 = f2 = None
    if speed_times is not None and speed_mps is not None and len(speed_times) >= 3:
        sdot = np.gradient(np.asarray(speed_mps, dtype=float), np.asarray(speed_times, dtype=float))
        sdot_i = np.interp(t, speed_times, sdot, left=0.0, right=0.0)
        c1 = float(h1 @ sdot_i)
        c2 = float(h2 @ sdot_i)
        norm = float(np.hypot(c1, c2))
        if norm > 1e-9:
            f1, f2 = c1 / norm, c2 / norm
    if f1 is None and mounting_yaw_deg is not None:
        yaw = np.radians(mounting_yaw_deg)
        f1, f2 = float(np.cos(yaw)), float(np.sin(yaw))
    if f1 is None:
        # no usable orientation cue; only acceptable when there are no
        # horizontal dynamics to misattribute
        if float(np.sqrt(np.mean(h1**2 + h2**2))) > 0.05:
            raise ValueError("need mounting_yaw_deg or a speed channel to fix the forward axis")
        f1, f2 = 1.0, 0.0

    fwd = f1 * e1 + f2 * e2
    left = np.cross(up, fwd)
    a_long = dyn @ fwd
    a_lat = dyn @ left
    return VehicleFrameAccel(t=t, a_long=a_long, a_lat=a_lat, a_vert=a_vert)


def _excursions(t: np.ndarray, x: np.ndarray, open_thresh: float, close_thresh: float, sign: int):
    """Hysteresis runs: open when sign*x >= open_thresh, close when
    sign*x < close_thresh. Returns [(i0, i1_inclusive)]."""
    s = sign * x
    runs = []
    open_i = None
    for i in range(len(s)):
        if open_i is None:
            if s[i] >= open_thresh:
                open_i = i
        else:
            if s[i] < close_thresh:
                runs.append((open_i, i - 1))
                open_i = None
    if open_i is not None:
        runs.append((open_i, len(s) - 1))
    return runs


def _merge_runs(runs, t, gap_s):
    merged = []
    for r in runs:
        if merged and t[r[0]] - t[merged[-1][1]] < gap_s:
            merged[-1] = (merged[-1][0], max(merged[-1][1], r[1]))
        else:
            merged.append(list(r))
    return [tuple(m) for m in merged]


def detect_harsh_events(
    accel: VehicleFrameAccel, cfg: Config | None = None, min_duration_s: float | None = None
) -> list[MotionEvent]:
    """Threshold/hysteresis detection of harsh acceleration, braking, and
    cornering. Same-kind excursions separated by less than the merge gap
    fuse into one event; events shorter than min_duration_s are dropped."""
    cfg = cfg or Config()
    if min_duration_s is None:
        min_duration_s = cfg.harsh_min_duration_s
    close_frac = cfg.hysteresis_fraction
    specs = [
        (KIND_HARSH_ACCEL, accel.a_long, abs(cfg.harsh_accel_threshold), +1),
        (KIND_HARSH_BRAKE, accel.a_long, abs(cfg.harsh_brake_threshold), -1),
        (KIND_HARSH_CORNER, accel.a_lat, abs(cfg.harsh_corner_threshold), +1),
        (KIND_HARSH_CORNER, accel.a_lat, abs(cfg.harsh_corner_threshold), -1),
    ]
    t = accel.t
    events: list[MotionEvent] = []
    corner_runs = []
    for kind, x, thresh, sign in specs:
        runs = _excursions(t, x, thresh, close_frac * thresh, sign)
        if kind == KIND_HARSH_CORNER:
            corner_runs.extend(runs)
            continue
        runs = _merge_runs(runs, t, cfg.harsh_merge_gap_s)
        for i0, i1 in runs:
            dur = float(t[i1] - t[i0])
            if dur >= min_duration_s:
                seg = x[i0 : i1 + 1]
                peak = float(seg[np.argmax(np.abs(seg))])
                events.append(MotionEvent(kind, float(t[i0]), float(t[i1]), peak, dur))
    # cornering: left and right excursions share one kind
    corner_runs.sort()
    corner_runs = _merge_runs(corner_runs, t, cfg.harsh_merge_gap_s)
    for i0, i1 in corner_runs:
        dur = float(t[i1] - t[i0])
        if dur >= min_duration_s:
            seg = accel.a_lat[i0 : i1 + 1]
            peak = float(seg[np.argmax(np.abs(seg))])
            events.append(MotionEvent(KIND_HARSH_CORNER, float(t[i0]), float(t[i1]), peak, dur))
    events.sort(key=lambda e: (e.t_start, e.kind))
    return events


def detect_potholes(
    accel: VehicleFrameAccel, window_s: float | None = None, z_thresh: float | None = None,
    cfg: Config | None = None,
) -> list[MotionEvent]:
    """Pavement-impact detection on the high-passed vertical channel.

    The threshold adapts to the trip: windowed peaks must exceed
    z_thresh times the median absolute deviation of the whole trip's
    vertical channel. Consecutive qualifying windows merge.
    """
    cfg = cfg or Config()
    window_s = window_s if window_s is not None else cfg.pothole_window_s
    z_thresh = z_thresh if z_thresh is not None else cfg.pothole_z_thresh
    if window_s <= 0:
        raise ValueError("window_s must be positive")
    t = accel.t
    if len(t) < 8:
        return []
    fs = 1.0 / float(np.median(np.diff(t)))
    hp = _highpass(accel.a_vert, fs, cfg.pothole_highpass_hz)
    mad = float(np.median(np.abs(hp - np.median(hp))))
    if mad <= 0:
        return []
    thresh = z_thresh * mad

    n_win = max(1, int(np.ceil((t[-1] - t[0]) / window_s)))
    idx = np.minimum(((t - t[0]) / window_s).astype(int), n_win - 1)
    events = []
    hot = []
    for w in range(n_win):
        sel = idx == w
        if not sel.any():
            continue
        if np.abs(hp[sel]).max() > thresh:
            hot.append(w)
    # merge consecutive hot windows
    groups = []
    for w in hot:
        if groups and w == groups[-1][-1] + 1:
            groups[-1].append(w)
        else:
            groups.append([w])
    for g in groups:
        sel = (idx >= g[0]) & (idx <= g[-1])
        seg = hp[sel]
        tt = t[sel]
        peak_i = int(np.argmax(np.abs(seg)))
        events.append(
            MotionEvent(
                KIND_POTHOLE,
                float(tt[0]),
                float(tt[-1]),
                float(seg[peak_i]),
                float(max(tt[-1] - tt[0], 1.0 / fs)),
            )
        )
    return events


@dataclass
class SpeedFlag:
    t_start: float
    t_end: float
    mean_diff_kph: float


@dataclass
class ConsistencyReport:
    rms_diff_kph: float
    flags: list[SpeedFlag]
    n_compared: int


def gnss_speed_kph(fixes, smooth_s: float = 1.0):
    """Speed from finite differences of haversine distances between
    positioned fixes, smoothed over smooth_s."""
    pts = [(f.t, f.lat, f.lon) for f in fixes if f.has_position]
    if len(pts) < 2:
        raise TooFewSamples("need >= 2 positioned fixes")
    arr = np.asarray(pts, dtype=float)
    t, lat, lon = arr[:, 0], arr[:, 1], arr[:, 2]
    if smooth_s > 0:
        dt = float(np.median(np.diff(t)))
        win = max(1, int(round(smooth_s / dt)))
        if win > 1:
            kernel = np.ones(win) / win
            lat = np.convolve(lat, kernel, mode="valid")
            lon = np.convolve(lon, kernel, mode="valid")
            t = np.convolve(t, kernel, mode="valid")
    d = haversine_arrays(lat[:-1], lon[:-1], lat[1:], lon[1:])
    dt = np.diff(t)
    good = dt > 0
    mid_t = (t[:-1] + t[1:]) / 2.0
    return mid_t[good], (d[good] / dt[good]) * 3.6


def speed_consistency(
    obd_speed: SyncedStream, gnss: SyncedStream, cfg: Config | None = None
) -> ConsistencyReport:
    """Cross-validate OBD speed against GNSS-derived speed."""
    cfg = cfg or Config()
    readings = [(r.t, r.value) for r in obd_speed.records]
    if len(readings) < 2:
        raise TooFewSamples("need >= 2 OBD speed readings")
    obd_t = np.array([r[0] for r in readings])
    obd_v = np.array([r[1] for r in readings])
    g_t, g_v = gnss_speed_kph(gnss.records, smooth_s=cfg.speedcheck_smooth_s)
    lo = max(obd_t[0], g_t[0])
    hi = min(obd_t[-1], g_t[-1])
    if hi <= lo:
        raise NoOverlap("OBD and GNSS streams do not overlap in time")
    sel = (g_t >= lo) & (g_t <= hi)
    t = g_t[sel]
    diff = np.interp(t, obd_t, obd_v) - g_v[sel]
    rms = float(np.sqrt(np.mean(diff**2))) if len(diff) else 0.0

    flags = []
    bad = np.abs(diff) > cfg.speedcheck_flag_kph
    i = 0
    while i < len(bad):
        if bad[i]:
            j = i
            while j + 1 < len(bad) and bad[j + 1]:
                j += 1
            if t[j] - t[i] > cfg.speedcheck_flag_sustain_s:
                flags.append(SpeedFlag(float(t[i]), float(t[j]), float(np.mean(np.abs(diff[i : j + 1])))))
            i = j + 1
        else:
            i += 1
    return ConsistencyReport(rms_diff_kph=rms, flags=flags, n_compared=int(len(diff)))
