"""OBD-II PID decoding per SAE J1979 scaling.

Supported PIDs are exactly the three vehicle-state channels the pipeline
consumes: engine RPM, vehicle speed, and accelerator pedal position D.
The decode table is extensible; add a PidSpec to support more.

Frames travel in obd.csv as `t,PID,DATA` with PID and DATA hex-encoded,
e.g. `12.400000,0C,1AF0`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import MalformedField, NonNumeric, PayloadLengthMismatch, UnsupportedPid
from ..records import OBD_PEDAL_PCT, OBD_RPM, OBD_SPEED_KPH, ObdReading, RawObdFrame
from .streams import format_header, parse_header


@dataclass(frozen=True)
class PidSpec:
    pid: int
    quantity: str
    n_bytes: int
    decode: Callable[[bytes], float]
    encode: Callable[[float], bytes]
    lo: float
    hi: float


def _encode_rpm(v: float) -> bytes:
    n = round(v * 4)
    return bytes(((n >> 8) & 0xFF, n & 0xFF))


PID_TABLE: dict[int, PidSpec] = {
    0x0C: PidSpec(0x0C, OBD_RPM, 2, lambda d: (256 * d[0] + d[1]) / 4.0, _encode_rpm, 0.0, 16383.75),
    0x0D: PidSpec(0x0D, OBD_SPEED_KPH, 1, lambda d: float(d[0]), lambda v: bytes((round(v),)), 0.0, 255.0),
    0x49: PidSpec(
        0x49,
        OBD_PEDAL_PCT,
        1,
        lambda d: 100.0 * d[0] / 255.0,
        lambda v: bytes((round(v * 255.0 / 100.0),)),
        0.0,
        100.0,
    ),
}


def decode_obd_frame(frame: RawObdFrame) -> ObdReading:
    spec = PID_TABLE.get(frame.pid)
    if spec is None:
        raise UnsupportedPid(f"pid 0x{frame.pid:02X}")
    if len(frame.data) != spec.n_bytes:
        raise PayloadLengthMismatch(
            f"pid 0x{frame.pid:02X} expects {spec.n_bytes} bytes, got {len(frame.data)}"
        )
    return ObdReading(t=frame.t, pid=frame.pid, quantity=spec.quantity, value=spec.decode(frame.data))


def encode_obd_reading(reading: ObdReading) -> RawObdFrame:
    spec = PID_TABLE.get(reading.pid)
    if spec is None:
        raise UnsupportedPid(f"pid 0x{reading.pid:02X}")
    v = min(max(reading.value, spec.lo), spec.hi)
    return RawObdFrame(t=reading.t, pid=reading.pid, data=spec.encode(v))


def parse_obd_line(line: str) -> RawObdFrame:
    parts = line.strip().split(",")
    if len(parts) != 3:
        raise MalformedField("field_count", f"expected t,pid,data; got {len(parts)} fields")
    try:
        t = float(parts[0])
    except ValueError:
        raise NonNumeric("t", parts[0]) from None
    try:
        pid = int(parts[1], 16)
    except ValueError:
        raise MalformedField("pid", f"'{parts[1]}'") from None
    try:
        data = bytes.fromhex(parts[2])
    except ValueError:
        raise MalformedField("data", f"'{parts[2]}'") from None
    if not 1 <= len(data) <= 4:
        raise MalformedField("data", f"payload length {len(data)} outside 1..4")
    return RawObdFrame(t=t, pid=pid, data=data)


def encode_obd_line(frame: RawObdFrame) -> str:
    return f"{frame.t:.6f},{frame.pid:02X},{frame.data.hex().upper()}"


def read_obd_csv(path) -> tuple[list[ObdReading], dict]:
    readings = []
    header = {}
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                header.update(parse_header(line))
                continue
            readings.append(decode_obd_frame(parse_obd_line(line)))
    return readings, header


def write_obd_csv(path, frames, header: dict | None = None):
    with open(path, "w") as f:
        f.write(format_header("obd", header))
        for frame in frames:
            f.write(encode_obd_line(frame) + "\n")
