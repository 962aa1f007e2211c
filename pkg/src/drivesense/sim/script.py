"""Drive scripts: everything a synthetic trip needs, JSON-serializable.

The seed fully determines the generated streams; two runs of the same
script are byte-identical.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field


@dataclass
class InjectedEvent:
    """One scripted occurrence. Known kinds:

    harsh_brake {decel, duration}      harsh_accel {accel, duration}
    harsh_corner {peak, duration}      pothole {peak}
    gentle_brake {decel, duration}     (sub-threshold; reaction responses)
    eyes_closed {duration}             distraction {duration, yaw_offset}
    yawn {duration}                    phone_use/smoking {duration}
    lane_crossing {n, spacing}         near_collision {min_distance, duration, start_distance}
    taillight {}                       pedestrian {duration, crossing}
    red_light {node_index, comply, red_on, red_off, sight_m}
    stop_sign {node_index, comply, sight_m}

    t is on the trip's GPS timeline; node-anchored kinds ignore it for
    placement but keep it for ordering.
    """

    kind: str
    t: float
    params: dict = field(default_factory=dict)


@dataclass
class DriveScript:
    seed: int
    trip_id: str
    driver_id: str
    epoch_utc: str = "2026-01-05T08:00:00+00:00"
    # route: explicit node sequence, or endpoints for auto shortest path
    route: list[int] | None = None
    route_from: int | None = None
    route_to: int | None = None
    cruise_kph: float = 54.0
    corner_radius_m: float = 12.0
    s_start_margin_m: float = 80.0
    s_end_margin_m: float = 80.0
    idle_before_s: float = 12.0
    idle_after_s: float = 6.0
    events: list[InjectedEvent] = field(default_factory=list)

    # GNSS noise: first-order Gauss-Markov per axis
    rtk: bool = False
    gps_sigma_m: float = 4.9
    rtk_sigma_m: float = 0.03
    gps_tau_s: float = 30.0

    # IMU noise
    imu_accel_sigma: float = 0.06
    imu_texture_amp: float = 0.45   # uniform vertical road texture, m/s^2
    imu_gyro_sigma: float = 0.004
    mag_sigma_ut: float = 0.4
    mounting_yaw_deg: float = 0.0   # sensor yaw relative to vehicle forward
    mounting_upside_down: bool = False

    # driver camera
    head_yaw_jitter_deg: float = 3.0
    camera_yaw_deg: float = -12.0   # dashboard placement: head pose reads off-center

    # unit clocks (t_unit = t_gps*(1+drift_ppm*1e-6) + offset_s)
    telemetry_offset_s: float = 0.0
    telemetry_drift_ppm: float = 0.0
    vision_offset_s: float = 0.0
    vision_drift_ppm: float = 0.0
    anchor_jitter_s: float = 0.001

    # stream rates
    gnss_hz: float = 10.0
    imu_hz: float = 100.0
    obd_hz: float = 10.0
    vision_hz: float = 10.0
    rmc_every: int = 10  # one RMC per this many fixes

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["events"] = [dataclasses.asdict(e) for e in self.events]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DriveScript":
        d = dict(d)
        d["events"] = [InjectedEvent(**e) for e in d.get("events", [])]
        return cls(**d)


def save_script(script: DriveScript, path):
    with open(path, "w") as f:
        json.dump(script.to_dict(), f, indent=1, sort_keys=True)
        f.write("\n")


def load_script(path) -> DriveScript:
    with open(path) as f:
        return DriveScript.from_dict(json.load(f))
