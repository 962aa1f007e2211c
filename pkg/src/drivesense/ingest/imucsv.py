"""IMU CSV stream: t,ax,ay,az,gx,gy,gz,mx,my,mz per line.

Units: seconds, m/s^2, rad/s, uT. Bulk reads return a columnar ImuStream
(numpy) because downstream filtering works on arrays; parse_imu_record
is the per-line contract used by the round-trip tests.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import FieldCount, NonNumeric
from ..records import ImuSample, ImuStream
from .streams import format_header, parse_header

_FIELDS = ("t", "ax", "ay", "az", "gx", "gy", "gz", "mx", "my", "mz")


def parse_imu_record(line: str) -> ImuSample:
    parts = line.strip().split(",")
    if len(parts) != 10:
        raise FieldCount(f"expected 10 fields, got {len(parts)}")
    vals = []
    for name, part in zip(_FIELDS, parts):
        try:
            v = float(part)
        except ValueError:
            raise NonNumeric(name, f"'{part}'") from None
        if not math.isfinite(v):
            raise NonNumeric(name, f"'{part}' not finite")
        vals.append(v)
    return ImuSample(
        t=vals[0], accel=tuple(vals[1:4]), gyro=tuple(vals[4:7]), mag=tuple(vals[7:10])
    )


def encode_imu_record(sample: ImuSample) -> str:
    vals = (sample.t, *sample.accel, *sample.gyro, *sample.mag)
    return ",".join(f"{v:.6f}" for v in vals)


def read_imu_csv(path) -> tuple[ImuStream, dict]:
    header = {}
    with open(path) as f:
        first = f.readline()
        if first.startswith("#"):
            header.update(parse_header(first))
        else:
            f.seek(0)
        data = np.loadtxt(f, delimiter=",", ndmin=2)
    if data.size == 0:
        return ImuStream(np.empty(0), np.empty((0, 3)), np.empty((0, 3)), np.empty((0, 3))), header
    if data.shape[1] != 10:
        raise FieldCount(f"expected 10 columns, got {data.shape[1]}")
    return ImuStream(data[:, 0], data[:, 1:4], data[:, 4:7], data[:, 7:10]), header


def write_imu_csv(path, stream: ImuStream, header: dict | None = None):
    with open(path, "w") as f:
        f.write(format_header("imu", header))
        cols = np.column_stack([stream.t, stream.accel, stream.gyro, stream.mag])
        np.savetxt(f, cols, fmt="%.6f", delimiter=",")
