"""Vision detection stream: one JSON object per line.

Each line carries {"t": ..., "camera": "driver"|"front", "kind": ...}
plus kind-specific attributes inline (e.g. yaw_deg for head_pose).
Classifier inference happens upstream; this module only types and
validates the detections the cameras emit.
"""

from __future__ import annotations

import json

from ..errors import CameraKindMismatch, MalformedField, UnknownKind
from ..records import (
    ALL_KINDS,
    CAMERA_KINDS,
    KIND_EYE_STATE,
    KIND_FRONT_TAILLIGHT,
    KIND_HEAD_POSE,
    KIND_NEAR_COLLISION,
    KIND_PEDESTRIAN,
    KIND_TRAFFIC_LIGHT,
    VisionEvent,
)
from .streams import format_header, parse_header

_STATE_VALUES = {
    KIND_EYE_STATE: {"open", "closed"},
    KIND_TRAFFIC_LIGHT: {"red", "yellow", "green"},
    KIND_FRONT_TAILLIGHT: {"on", "off"},
}


def _check_attrs(kind: str, attrs: dict):
    if kind in _STATE_VALUES:
        state = attrs.get("state")
        if state not in _STATE_VALUES[kind]:
            raise MalformedField("state", f"'{state}' invalid for {kind}")
    elif kind == KIND_HEAD_POSE:
        for key in ("yaw_deg", "pitch_deg"):
            if not isinstance(attrs.get(key), (int, float)):
                raise MalformedField(key, "missing or non-numeric")
    elif kind == KIND_NEAR_COLLISION:
        d = attrs.get("distance_m")
        if not isinstance(d, (int, float)) or d < 0:
            raise MalformedField("distance_m", f"'{d}'")
    elif kind == KIND_PEDESTRIAN:
        if not isinstance(attrs.get("crossing"), bool):
            raise MalformedField("crossing", "missing or non-bool")


def parse_vision_event(line: str) -> VisionEvent:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise MalformedField("json", str(e)) from None
    if not isinstance(obj, dict):
        raise MalformedField("json", "not an object")
    try:
        t = float(obj["t"])
    except (KeyError, TypeError, ValueError):
        raise MalformedField("t", "missing or non-numeric") from None
    camera = obj.get("camera")
    kind = obj.get("kind")
    if camera not in CAMERA_KINDS:
        raise MalformedField("camera", f"'{camera}'")
    if kind not in ALL_KINDS:
        raise UnknownKind(f"'{kind}'")
    if kind not in CAMERA_KINDS[camera]:
        raise CameraKindMismatch(f"camera '{camera}' cannot emit '{kind}'")
    attrs = {k: v for k, v in obj.items() if k not in ("t", "camera", "kind")}
    _check_attrs(kind, attrs)
    return VisionEvent(t=t, camera=camera, kind=kind, attrs=attrs)


def encode_vision_event(ev: VisionEvent) -> str:
    obj = {"t": ev.t, "camera": ev.camera, "kind": ev.kind}
    obj.update(ev.attrs)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def read_vision_jsonl(path) -> tuple[list[VisionEvent], dict]:
    events = []
    header = {}
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                header.update(parse_header(line))
                continue
            events.append(parse_vision_event(line))
    return events, header


def write_vision_jsonl(path, events, header: dict | None = None):
    with open(path, "w") as f:
        f.write(format_header("vision", header))
        for ev in events:
            f.write(encode_vision_event(ev) + "\n")
