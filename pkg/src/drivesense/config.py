"""Pipeline configuration: every detection threshold lives here.

Thresholds are configuration, not claims. A config file (YAML or JSON)
overrides any subset of keys; unknown keys are rejected so typos fail
loudly. The effective config is echoed into each trip manifest.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import TypeMismatch, UnknownKey


@dataclass
class Config:
    # stream validation
    gap_threshold_s: float = 5.0

    # adaptive downsampling
    downsample_base_period_s: float = 1.0
    downsample_burst_radius_s: float = 2.0

    # harsh motion events (m/s^2 unless noted)
    harsh_accel_threshold: float = 3.0
    harsh_brake_threshold: float = -3.0
    harsh_corner_threshold: float = 3.5
    harsh_min_duration_s: float = 0.3
    harsh_merge_gap_s: float = 1.0
    hysteresis_fraction: float = 0.8   # close at this fraction of the open threshold

    # pothole detection
    pothole_window_s: float = 0.5
    pothole_z_thresh: float = 6.0      # multiples of the trip's vertical MAD
    pothole_highpass_hz: float = 1.0

    # gravity alignment
    gravity_lowpass_hz: float = 0.2
    quiescent_rms_ms2: float = 0.8     # high-frequency RMS below this counts as quiet

    # OBD vs GNSS speed cross-check
    speedcheck_flag_kph: float = 10.0
    speedcheck_flag_sustain_s: float = 5.0
    speedcheck_smooth_s: float = 1.0

    # vision analytics
    perclos_window_s: float = 60.0
    eyes_closed_min_s: float = 0.5
    distraction_yaw_deg: float = 30.0
    distraction_min_duration_s: float = 2.0
    distraction_merge_gap_s: float = 1.0
    mounting_yaw_calib_s: float = 60.0
    yawn_min_duration_s: float = 1.5
    yawn_closed_fraction: float = 0.5
    lane_crossing_merge_s: float = 1.0
    near_collision_distance_m: float = 8.0
    encounter_gap_s: float = 5.0

    # map matching
    index_cell_m: float = 250.0
    match_k: int = 8
    match_offnetwork_m: float = 200.0
    match_sigma_gps_m: float = 4.9     # typical GPS accuracy
    match_sigma_rtk_fixed_m: float = 0.03
    match_sigma_rtk_float_m: float = 0.3
    match_sigma_dgps_m: float = 2.5
    match_beta_m: float = 3.0          # transition penalty scale
    detour_ratio_threshold: float = 1.6
    detour_min_shortest_m: float = 50.0
    lane_half_width_m: float = 1.8
    lane_dev_min_duration_s: float = 1.0

    # trip segmentation
    trip_start_speed_kph: float = 3.0
    trip_start_sustain_s: float = 10.0
    trip_end_speed_kph: float = 1.0
    trip_end_sustain_s: float = 300.0

    # fusion
    reaction_max_window_s: float = 5.0
    reaction_brake_accel: float = -1.0   # brake onset when a_long crosses below this
    reaction_pedal_drop_pct: float = 10.0
    redlight_advance_m: float = 10.0
    stopsign_window_s: float = 10.0
    stopsign_speed_kph: float = 2.0
    gaze_lookback_s: float = 3.0
    locate_window_s: float = 1.0

    # travel pattern
    night_start: str = "21:00"
    night_end: str = "06:00"
    tz_offset_hours: float = 0.0

    def as_dict(self):
        return dataclasses.asdict(self)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(Config)}


def _coerce(key, value):
    want = _FIELD_TYPES[key]
    if want == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TypeMismatch(f"key '{key}' expects a number, got {type(value).__name__}")
        return float(value)
    if want == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeMismatch(f"key '{key}' expects an integer, got {type(value).__name__}")
        return value
    if want == "str":
        if not isinstance(value, str):
            raise TypeMismatch(f"key '{key}' expects a string, got {type(value).__name__}")
        return value
    raise TypeMismatch(f"key '{key}' has unsupported type {want}")


def config_from_dict(overrides: dict) -> Config:
    cfg = Config()
    for key, value in overrides.items():
        if key not in _FIELD_TYPES:
            raise UnknownKey(f"unknown config key '{key}'")
        setattr(cfg, key, _coerce(key, value))
    return cfg


def config_load(path) -> Config:
    """Load a config file; missing keys take defaults, unknown keys are rejected."""
    text = Path(path).read_text()
    data = yaml.safe_load(text)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise TypeMismatch("config file must hold a key-value mapping")
    return config_from_dict(data)
