"""Typed records for the four raw sensor stream types.

All timestamps are seconds on the emitting unit's local clock until a
clock model has been applied (see drivesense.timesync), after which they
are seconds on the shared GPS timeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional

import numpy as np

ACCEL_SANITY_MS2 = 160.0  # ~16 g; rejects encoding garbage, admits pothole hits


class FixQuality(IntEnum):
    """GGA quality indicator values."""

    NO_FIX = 0
    GPS = 1
    DGPS = 2
    RTK_FIXED = 4
    RTK_FLOAT = 5


@dataclass
class GnssFix:
    """One positioned (or explicitly unpositioned) GNSS solution.

    utc_s is absolute UTC epoch seconds when the sentence carried a date
    (RMC); GGA-only fixes leave it None.
    """

    t: float
    lat: Optional[float] = None
    lon: Optional[float] = None
    alt_m: Optional[float] = None
    fix_quality: FixQuality = FixQuality.NO_FIX
    hdop: Optional[float] = None
    n_sats: Optional[int] = None
    utc_s: Optional[float] = None
    speed_kph: Optional[float] = None
    course_deg: Optional[float] = None

    @property
    def has_position(self):
        return self.fix_quality != FixQuality.NO_FIX and self.lat is not None and self.lon is not None

    def validate(self):
        if not math.isfinite(self.t):
            raise ValueError("t not finite")
        if self.fix_quality == FixQuality.NO_FIX:
            if self.lat is not None or self.lon is not None:
                raise ValueError("NoFix record carries a position")
            return
        if self.lat is None or not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"lat out of bounds: {self.lat}")
        if self.lon is None or not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"lon out of bounds: {self.lon}")
        if self.hdop is not None and self.hdop < 0:
            raise ValueError("hdop negative")
        if self.n_sats is not None and self.n_sats < 0:
            raise ValueError("n_sats negative")


# supported OBD decode quantities
OBD_RPM = "rpm"
OBD_SPEED_KPH = "speed_kph"
OBD_PEDAL_PCT = "pedal_pct"


@dataclass
class ObdReading:
    """A decoded OBD-II value: engine RPM, vehicle speed, or pedal position."""

    t: float
    pid: int
    quantity: str
    value: float

    def validate(self):
        if self.quantity == OBD_RPM and self.value < 0:
            raise ValueError("rpm negative")
        if self.quantity == OBD_SPEED_KPH and self.value < 0:
            raise ValueError("speed negative")
        if self.quantity == OBD_PEDAL_PCT and not 0.0 <= self.value <= 100.0:
            raise ValueError("pedal_pct out of range")


@dataclass
class RawObdFrame:
    """Raw PID payload as read off the CAN bus."""

    t: float
    pid: int
    data: bytes


@dataclass
class ImuSample:
    """Tri-axial accelerometer (m/s^2), gyroscope (rad/s), magnetometer (uT)."""

    t: float
    accel: tuple[float, float, float]
    gyro: tuple[float, float, float]
    mag: tuple[float, float, float]

    def validate(self):
        for v in (*self.accel, *self.gyro, *self.mag, self.t):
            if not math.isfinite(v):
                raise ValueError("non-finite component")
        if math.sqrt(sum(a * a for a in self.accel)) >= ACCEL_SANITY_MS2:
            raise ValueError(f"|accel| >= {ACCEL_SANITY_MS2} m/s^2")


@dataclass
class ImuStream:
    """Columnar IMU stream for bulk processing. Arrays share length N."""

    t: np.ndarray          # (N,)
    accel: np.ndarray      # (N, 3)
    gyro: np.ndarray       # (N, 3)
    mag: np.ndarray        # (N, 3)

    def __len__(self):
        return len(self.t)

    def times(self):
        return self.t

    def with_times(self, new_t):
        return ImuStream(np.asarray(new_t, dtype=float), self.accel, self.gyro, self.mag)

    def to_records(self):
        return [
            ImuSample(float(self.t[i]), tuple(self.accel[i]), tuple(self.gyro[i]), tuple(self.mag[i]))
            for i in range(len(self.t))
        ]

    @classmethod
    def from_records(cls, samples):
        samples = list(samples)
        return cls(
            np.array([s.t for s in samples], dtype=float),
            np.array([s.accel for s in samples], dtype=float).reshape(-1, 3),
            np.array([s.gyro for s in samples], dtype=float).reshape(-1, 3),
            np.array([s.mag for s in samples], dtype=float).reshape(-1, 3),
        )


# camera identifiers
CAMERA_DRIVER = "driver"
CAMERA_FRONT = "front"

# vision detection kinds
KIND_EYE_STATE = "eye_state"
KIND_YAWN = "yawn"
KIND_HEAD_POSE = "head_pose"
KIND_PHONE_USE = "phone_use"
KIND_SMOKING = "smoking"
KIND_TRAFFIC_LIGHT = "traffic_light"
KIND_STOP_SIGN = "stop_sign"
KIND_FRONT_TAILLIGHT = "front_taillight"
KIND_LANE_CROSSING = "lane_crossing"
KIND_NEAR_COLLISION = "near_collision"
KIND_PEDESTRIAN = "pedestrian"

DRIVER_KINDS = frozenset({KIND_EYE_STATE, KIND_YAWN, KIND_HEAD_POSE, KIND_PHONE_USE, KIND_SMOKING})
FRONT_KINDS = frozenset(
    {KIND_TRAFFIC_LIGHT, KIND_STOP_SIGN, KIND_FRONT_TAILLIGHT, KIND_LANE_CROSSING, KIND_NEAR_COLLISION, KIND_PEDESTRIAN}
)
ALL_KINDS = DRIVER_KINDS | FRONT_KINDS

CAMERA_KINDS = {CAMERA_DRIVER: DRIVER_KINDS, CAMERA_FRONT: FRONT_KINDS}


@dataclass
class VisionEvent:
    """One per-frame detection from either in-vehicle camera."""

    t: float
    camera: str
    kind: str
    attrs: dict = field(default_factory=dict)

    def validate(self):
        if self.camera not in CAMERA_KINDS:
            raise ValueError(f"unknown camera '{self.camera}'")
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown kind '{self.kind}'")
        if self.kind not in CAMERA_KINDS[self.camera]:
            raise ValueError(f"camera '{self.camera}' cannot emit '{self.kind}'")
        if self.kind == KIND_NEAR_COLLISION and self.attrs.get("distance_m", 0.0) < 0:
            raise ValueError("distance_m negative")
