"""Synthesize raw sensor streams plus ground truth from a drive script.

Everything downstream of the script is deterministic in the seed. The
streams are kinematically consistent by construction: OBD speed is the
controller's speed, IMU longitudinal acceleration is its derivative,
GNSS positions sample the same path, and injected events leave evidence
in every stream they touch. truth.json records what was injected (with
trace-accurate timing) so the pipeline can be scored against it.
"""

from __future__ import annotations

import json
import math
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ..config import Config
from ..errors import ScriptEventOutsideDrive
from ..geo import LocalProjection
from ..ingest.imucsv import write_imu_csv
from ..ingest.nmea import encode_gga, encode_rmc, write_gnss_file
from ..ingest.obd import encode_obd_reading, write_obd_csv
from ..ingest.vision import write_vision_jsonl
from ..mapmatch.network import RoadNetwork, save_network
from ..mapmatch.routing import DistanceCache, position_distance, shortest_path
from ..records import (
    CAMERA_DRIVER,
    CAMERA_FRONT,
    FixQuality,
    GnssFix,
    ImuStream,
    KIND_EYE_STATE,
    KIND_HEAD_POSE,
    KIND_LANE_CROSSING,
    KIND_NEAR_COLLISION,
    KIND_PEDESTRIAN,
    KIND_PHONE_USE,
    KIND_SMOKING,
    KIND_STOP_SIGN,
    KIND_TRAFFIC_LIGHT,
    KIND_FRONT_TAILLIGHT,
    KIND_YAWN,
    OBD_PEDAL_PCT,
    OBD_RPM,
    OBD_SPEED_KPH,
    ObdReading,
    VisionEvent,
)
from ..timesync import ClockModel
from .kinematics import ControllerParams, DriveTrace, Override, PathGeometry, StopDirective
from .kinematics import simulate_drive as run_controller
from .script import DriveScript

GRAVITY_MS2 = 9.80665
MAG_FIELD_ENU = (5.0, 20.0, -40.0)  # uT


def perturb_clock(times, offset_s: float, drift_ppm: float):
    """GPS seconds -> unit-clock seconds (exact inverse of apply_sync)."""
    return ClockModel(offset_s=offset_s, drift_ppm=drift_ppm).to_unit(times)


def _epoch_unix(epoch_utc: str) -> float:
    dt = datetime.fromisoformat(epoch_utc.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def _edge_lookup(network: RoadNetwork) -> dict[tuple[int, int], int]:
    lut: dict[tuple[int, int], int] = {}
    for e in sorted(network.edges.values(), key=lambda e: e.id):
        lut.setdefault((e.frm, e.to), e.id)
    return lut


def resolve_route(script: DriveScript, network: RoadNetwork) -> list[int]:
    if script.route:
        return list(script.route)
    if script.route_from is None or script.route_to is None:
        raise ValueError("script needs either route or route_from/route_to")
    edge_ids, _ = shortest_path(network, script.route_from, script.route_to)
    nodes = [script.route_from]
    for eid in edge_ids:
        nodes.append(network.edges[eid].to)
    return nodes


def _mounting_matrix(yaw_deg: float, upside_down: bool) -> np.ndarray:
    c, s = math.cos(math.radians(yaw_deg)), math.sin(math.radians(yaw_deg))
    m = np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])  # vehicle -> sensor
    if upside_down:
        flip = np.array([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]])  # roll 180
        m = flip @ m
    return m


def _ar1_noise(rng, n: int, sigma: float, tau_s: float, dt: float) -> np.ndarray:
    if sigma <= 0 or n == 0:
        return np.zeros(n)
    rho = math.exp(-dt / tau_s) if tau_s > 0 else 0.0
    w = rng.standard_normal(n)
    out = np.empty(n)
    out[0] = sigma * w[0]
    scale = sigma * math.sqrt(1.0 - rho * rho)
    for k in range(1, n):
        out[k] = rho * out[k - 1] + scale * w[k]
    return out


def _pulse(t: np.ndarray, t0: float, duration: float, peak: float) -> np.ndarray:
    """Half-sine pulse: smooth, peaks at peak, zero outside [t0, t0+duration]."""
    out = np.zeros_like(t)
    m = (t >= t0) & (t <= t0 + duration)
    out[m] = peak * np.sin(np.pi * (t[m] - t0) / duration)
    return out


def _impulse(t: np.ndarray, t0: float, peak: float, freq_hz: float = 12.0) -> np.ndarray:
    """One damped oscillation cycle: pavement impact signature."""
    out = np.zeros_like(t)
    period = 1.0 / freq_hz
    m = (t >= t0) & (t <= t0 + period)
    out[m] = peak * np.sin(2 * np.pi * freq_hz * (t[m] - t0)) * np.exp(-3.0 * (t[m] - t0) / period)
    return out


def synthesize(script: DriveScript, network: RoadNetwork, out_dir, write_network: bool = True) -> dict:
    """Generate gnss.nmea / imu.csv / obd.csv / vision.jsonl / truth.json
    under out_dir. Returns the truth dict."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(script.seed)
    cfg = Config()  # truth timing mirrors the documented default thresholds
    proj = LocalProjection(*network.center())
    epoch_unix = _epoch_unix(script.epoch_utc)

    route_nodes = resolve_route(script, network)
    lut = _edge_lookup(network)
    route_edge_ids = []
    for a, b in zip(route_nodes[:-1], route_nodes[1:]):
        eid = lut.get((a, b))
        if eid is None:
            raise ValueError(f"route hop {a}->{b} has no directed edge")
        route_edge_ids.append(eid)

    pts = np.array([proj.to_xy(*network.nodes[n]) for n in route_nodes])
    path = PathGeometry(pts, script.corner_radius_m)
    leg0 = float(np.hypot(*(pts[1] - pts[0])))
    legN = float(np.hypot(*(pts[-1] - pts[-2])))
    s_start = min(script.s_start_margin_m, 0.45 * leg0)
    s_end = path.total_length - min(script.s_end_margin_m, 0.45 * legN)
    if s_end - s_start < 50.0:
        raise ValueError("drive too short after margins")

    # --- directives from events ---
    overrides: list[Override] = []
    stops: list[StopDirective] = []
    lights = []   # (event, s_node)
    signs = []    # (event, s_node)
    for ev in script.events:
        p = ev.params
        if ev.kind == "harsh_brake":
            overrides.append(Override(ev.t, ev.t + p.get("duration", 1.0), p.get("decel", -4.0)))
        elif ev.kind == "harsh_accel":
            overrides.append(Override(ev.t, ev.t + p.get("duration", 1.0), p.get("accel", 3.8)))
        elif ev.kind == "gentle_brake":
            overrides.append(Override(ev.t, ev.t + p.get("duration", 1.5), p.get("decel", -2.0)))
        elif ev.kind == "red_light":
            s_node = path.vertex_s[p["node_index"]]
            lights.append((ev, s_node))
            if p.get("comply", False):
                stops.append(
                    StopDirective(
                        s_stop=s_node, kind="red_light", red_on=p["red_on"], red_off=p["red_off"]
                    )
                )
        elif ev.kind == "stop_sign":
            s_node = path.vertex_s[p["node_index"]]
            signs.append((ev, s_node))
            if p.get("comply", True):
                stops.append(StopDirective(s_stop=s_node, kind="stop_sign", dwell_s=1.5))

    params = ControllerParams(cruise_mps=script.cruise_kph / 3.6)
    trace = run_controller(
        path,
        dt=1.0 / script.imu_hz,
        s_start=s_start,
        s_end=s_end,
        idle_before_s=script.idle_before_s,
        idle_after_s=script.idle_after_s,
        params=params,
        overrides=overrides,
        stops=stops,
    )
    t = trace.t
    n = len(t)
    drive_end = trace.end_of_drive_t
    for ev in script.events:
        if ev.kind in ("red_light", "stop_sign"):
            continue
        if not (0.0 <= ev.t <= drive_end):
            raise ScriptEventOutsideDrive(f"{ev.kind} at t={ev.t:.1f} outside drive [0, {drive_end:.1f}]")

    x, y, heading, curv, edge_idx = path.sample_many(trace.s)
    lat_series = trace.v**2 * curv
    vert_series = np.zeros(n)
    for ev in script.events:
        p = ev.params
        if ev.kind == "harsh_corner":
            lat_series = lat_series + _pulse(t, ev.t, p.get("duration", 0.8), p.get("peak", 4.3))
        elif ev.kind == "pothole":
            vert_series = vert_series + _impulse(t, ev.t, p.get("peak", 18.0))

    truth_events: list[dict] = []
    stimuli: list[tuple[str, float]] = []

    def loc_at(tt: float) -> tuple[float, float]:
        s_at = float(np.interp(tt, t, trace.s))
        xx, yy, *_ = path.sample(s_at)
        lat, lon = proj.to_latlon(xx, yy)
        return float(lat), float(lon)

    def add_truth(kind, t0, t1, **attrs):
        lat, lon = loc_at(t0)
        truth_events.append({"kind": kind, "t_start": float(t0), "t_end": float(t1),
                             "lat": lat, "lon": lon, **attrs})

    # --- IMU ---
    mount = _mounting_matrix(script.mounting_yaw_deg, script.mounting_upside_down)
    texture = rng.uniform(-script.imu_texture_amp, script.imu_texture_amp, n)
    accel_noise = rng.normal(0.0, script.imu_accel_sigma, (n, 3))
    gyro_noise = rng.normal(0.0, script.imu_gyro_sigma, (n, 3))
    mag_noise = rng.normal(0.0, script.mag_sigma_ut, (n, 3))

    a_vehicle = np.column_stack([trace.a, lat_series, vert_series + texture])
    f_vehicle = a_vehicle + np.array([0.0, 0.0, GRAVITY_MS2])
    accel_sensor = f_vehicle @ mount.T + accel_noise
    yaw_rate = trace.v * curv
    gyro_sensor = np.column_stack([np.zeros(n), np.zeros(n), yaw_rate]) @ mount.T + gyro_noise
    be, bn, bu = MAG_FIELD_ENU
    b_vehicle = np.column_stack(
        [be * np.cos(heading) + bn * np.sin(heading),
         -be * np.sin(heading) + bn * np.cos(heading),
         np.full(n, bu)]
    )
    mag_sensor = b_vehicle @ mount.T + mag_noise

    tel_clock = ClockModel(offset_s=script.telemetry_offset_s, drift_ppm=script.telemetry_drift_ppm)
    vis_clock = ClockModel(offset_s=script.vision_offset_s, drift_ppm=script.vision_drift_ppm)
    t_imu_unit = tel_clock.to_unit(t)
    imu = ImuStream(t=t_imu_unit, accel=accel_sensor, gyro=gyro_sensor, mag=mag_sensor)
    header = {"epoch": script.epoch_utc, "unit": "telemetry"}
    write_imu_csv(out_dir / "imu.csv", imu, header)

    # --- OBD ---
    step = max(1, int(round(script.imu_hz / script.obd_hz)))
    kph = trace.v * 3.6
    pedal = np.where(trace.a < -0.3, 0.0, np.clip(10.0 + 22.0 * trace.v / params.cruise_mps + 16.0 * np.maximum(trace.a, 0.0), 0.0, 100.0))
    rpm = np.clip(800.0 + 35.0 * kph, 0.0, 6000.0)
    frames = []
    third = max(1, step // 3)
    for k in range(0, n, step):
        tk = float(tel_clock.to_unit(t[k]))
        frames.append(encode_obd_reading(ObdReading(tk, 0x0D, OBD_SPEED_KPH, float(kph[k]))))
        k2 = min(k + third, n - 1)
        frames.append(encode_obd_reading(ObdReading(float(tel_clock.to_unit(t[k2])), 0x0C, OBD_RPM, float(rpm[k2]))))
        k3 = min(k + 2 * third, n - 1)
        frames.append(encode_obd_reading(ObdReading(float(tel_clock.to_unit(t[k3])), 0x49, OBD_PEDAL_PCT, float(pedal[k3]))))
    write_obd_csv(out_dir / "obd.csv", frames, header)

    # --- GNSS ---
    step_g = max(1, int(round(script.imu_hz / script.gnss_hz)))
    fix_k = np.arange(0, n, step_g)
    sigma = script.rtk_sigma_m if script.rtk else script.gps_sigma_m
    quality = FixQuality.RTK_FIXED if script.rtk else FixQuality.GPS
    dt_fix = step_g / script.imu_hz
    ne = _ar1_noise(rng, len(fix_k), sigma, script.gps_tau_s, dt_fix)
    nn = _ar1_noise(rng, len(fix_k), sigma, script.gps_tau_s, dt_fix)
    receipt_jitter = rng.normal(0.0, script.anchor_jitter_s, len(fix_k))
    rmc_jitter = rng.normal(0.0, script.anchor_jitter_s, len(fix_k))

    entries = []       # (t_unit, sentence)
    fix_truth = []     # aligned with positioned entries, file order
    hdop = 0.5 if script.rtk else 0.9
    nsats = 14 if script.rtk else 10
    for j, k in enumerate(fix_k):
        t_gps = float(t[k])
        lat, lon = proj.to_latlon(x[k] + ne[j], y[k] + nn[j])
        fix = GnssFix(
            t=0.0, lat=float(lat), lon=float(lon), alt_m=5.0, fix_quality=quality,
            hdop=hdop, n_sats=nsats,
        )
        tod = (epoch_unix + t_gps) % 86400.0
        t_unit = float(tel_clock.to_unit(t_gps)) + float(receipt_jitter[j])
        entries.append((t_unit, encode_gga(fix, utc_tod_s=tod)))
        fix_truth.append(
            {"t": t_gps, "edge_id": int(route_edge_ids[edge_idx[k]]), "moving": bool(trace.v[k] > 0.5)}
        )
        if script.rmc_every > 0 and j % script.rmc_every == 0:
            t_rmc = t_gps + 0.02
            rfix = GnssFix(
                t=0.0, lat=float(lat), lon=float(lon), fix_quality=quality,
                utc_s=epoch_unix + t_rmc, speed_kph=float(kph[k]),
                course_deg=float((90.0 - math.degrees(heading[k])) % 360.0),
            )
            t_unit_r = float(tel_clock.to_unit(t_rmc)) + float(rmc_jitter[j])
            entries.append((t_unit_r, encode_rmc(rfix)))
            fix_truth.append(
                {"t": t_rmc, "edge_id": int(route_edge_ids[edge_idx[k]]), "moving": bool(trace.v[k] > 0.5)}
            )
    write_gnss_file(out_dir / "gnss.nmea", entries, header)

    # --- vision ---
    head_jitter_all = rng.normal(0.0, script.head_yaw_jitter_deg, int(t[-1] * script.vision_hz) + 2)
    vis: list[VisionEvent] = []
    vdt = 1.0 / script.vision_hz
    n_vis = int(t[-1] / vdt) + 1
    eye_closed_windows = []
    yaw_windows = []  # (t0, t1, yaw_offset)
    for ev in script.events:
        p = ev.params
        if ev.kind == "eyes_closed":
            eye_closed_windows.append((ev.t, ev.t + p.get("duration", 2.0)))
            add_truth("EyesClosedEpisode", ev.t, ev.t + p.get("duration", 2.0))
        elif ev.kind == "yawn":
            dur = p.get("duration", 2.5)
            eye_closed_windows.append((ev.t, ev.t + dur))
            add_truth("YawnEpisode", ev.t, ev.t + dur)
        elif ev.kind == "distraction":
            dur = p.get("duration", 3.0)
            yaw_windows.append((ev.t, ev.t + dur, p.get("yaw_offset", 40.0)))
            add_truth("DistractionEpisode", ev.t, ev.t + dur)

    for i in range(n_vis):
        tv = i * vdt
        closed = any(a <= tv <= b for a, b in eye_closed_windows)
        vis.append(VisionEvent(tv, CAMERA_DRIVER, KIND_EYE_STATE, {"state": "closed" if closed else "open"}))
        yaw = script.camera_yaw_deg + float(head_jitter_all[i])
        for (a, b, off) in yaw_windows:
            if a <= tv <= b:
                yaw += off
                break
        vis.append(VisionEvent(tv, CAMERA_DRIVER, KIND_HEAD_POSE, {"yaw_deg": round(yaw, 2), "pitch_deg": -3.0}))

    s_vis = np.interp(np.arange(n_vis) * vdt, t, trace.s)
    for ev in script.events:
        p = ev.params
        if ev.kind == "yawn":
            dur = p.get("duration", 2.5)
            for i in range(n_vis):
                tv = i * vdt
                if ev.t <= tv <= ev.t + dur:
                    vis.append(VisionEvent(tv, CAMERA_DRIVER, KIND_YAWN, {}))
        elif ev.kind in ("phone_use", "smoking"):
            dur = p.get("duration", 5.0)
            kind = KIND_PHONE_USE if ev.kind == "phone_use" else KIND_SMOKING
            ep_kind = "PhoneUseEpisode" if ev.kind == "phone_use" else "SmokingEpisode"
            for i in range(n_vis):
                tv = i * vdt
                if ev.t <= tv <= ev.t + dur:
                    vis.append(VisionEvent(tv, CAMERA_DRIVER, kind, {}))
            add_truth(ep_kind, ev.t, ev.t + dur)
        elif ev.kind == "lane_crossing":
            count = int(p.get("n", 3))
            spacing = p.get("spacing", 0.3)
            for q in range(count):
                vis.append(VisionEvent(ev.t + q * spacing, CAMERA_FRONT, KIND_LANE_CROSSING, {}))
            add_truth("LaneCrossingEvent", ev.t, ev.t + (count - 1) * spacing)
        elif ev.kind == "pedestrian":
            dur = p.get("duration", 2.0)
            for i in range(n_vis):
                tv = i * vdt
                if ev.t <= tv <= ev.t + dur:
                    vis.append(VisionEvent(tv, CAMERA_FRONT, KIND_PEDESTRIAN, {"crossing": bool(p.get("crossing", True))}))
            add_truth("PedestrianEncounter", ev.t, ev.t + dur)
        elif ev.kind == "near_collision":
            dur = p.get("duration", 4.0)
            d_min = p.get("min_distance", 4.5)
            d0 = p.get("start_distance", 25.0)
            for i in range(n_vis):
                tv = i * vdt
                if ev.t <= tv <= ev.t + dur:
                    frac = 1.0 - abs(2.0 * (tv - ev.t) / dur - 1.0)
                    dist = d0 - (d0 - d_min) * frac
                    vis.append(VisionEvent(tv, CAMERA_FRONT, KIND_NEAR_COLLISION, {"distance_m": round(dist, 2)}))
            thr = cfg.near_collision_distance_m
            if d_min < thr <= d0:
                dt_cross = (d0 - thr) / (d0 - d_min) * (dur / 2.0)
                add_truth("NearCollisionEvent", ev.t + dt_cross, ev.t + dur - dt_cross,
                          min_distance_m=d_min)
        elif ev.kind == "taillight":
            for i in range(n_vis):
                tv = i * vdt
                if ev.t - 2.0 <= tv <= ev.t + 2.0:
                    state = "on" if tv >= ev.t else "off"
                    vis.append(VisionEvent(tv, CAMERA_FRONT, KIND_FRONT_TAILLIGHT, {"state": state}))
            stimuli.append(("taillight", float(math.ceil(ev.t / vdt) * vdt)))

    for (ev, s_node) in lights:
        p = ev.params
        sight = p.get("sight_m", 80.0)
        red_on, red_off = p["red_on"], p["red_off"]
        first_red_frame = None
        for i in range(n_vis):
            tv = i * vdt
            gap = s_node - s_vis[i]
            if 0.0 < gap <= sight:
                state = "red" if red_on <= tv < red_off else "green"
                vis.append(VisionEvent(tv, CAMERA_FRONT, KIND_TRAFFIC_LIGHT, {"state": state}))
                if state == "red" and first_red_frame is None:
                    first_red_frame = tv
        if first_red_frame is not None:
            stimuli.append(("traffic_light", first_red_frame))
        if not p.get("comply", False):
            # truth: time the vehicle advances past the threshold while red
            sel = (t >= red_on) & (t < red_off)
            if sel.any():
                adv = trace.s[sel] - trace.s[sel][0]
                over = np.nonzero(adv > cfg.redlight_advance_m)[0]
                if len(over):
                    t_cross = float(t[sel][over[0]])
                    add_truth("RedLightRun", t_cross, t_cross, advance_m=float(cfg.redlight_advance_m))

    for (ev, s_node) in signs:
        p = ev.params
        sight = p.get("sight_m", 40.0)
        first_frame = None
        for i in range(n_vis):
            tv = i * vdt
            gap = s_node - s_vis[i]
            if 0.0 < gap <= sight:
                vis.append(VisionEvent(tv, CAMERA_FRONT, KIND_STOP_SIGN, {}))
                if first_frame is None:
                    first_frame = tv
        if first_frame is not None and not p.get("comply", True):
            add_truth("StopSignViolation", first_frame, first_frame)

    # motion-event truth (timed events; trace-accurate by construction)
    for ev in script.events:
        p = ev.params
        if ev.kind == "harsh_brake":
            add_truth("HarshBrake", ev.t, ev.t + p.get("duration", 1.0), peak=p.get("decel", -4.0))
        elif ev.kind == "harsh_accel":
            add_truth("HarshAccel", ev.t, ev.t + p.get("duration", 1.0), peak=p.get("accel", 3.8))
        elif ev.kind == "harsh_corner":
            add_truth("HarshCorner", ev.t, ev.t + p.get("duration", 0.8), peak=p.get("peak", 4.3))
        elif ev.kind == "pothole":
            add_truth("Pothole", ev.t, ev.t + 0.1, peak=p.get("peak", 18.0))
            stimuli.append(("pothole", ev.t))

    # reaction truth: first brake onset (crossing -1.0) within the window
    reaction_truth = []
    for kind, t_stim in stimuli:
        sel = (t > t_stim) & (t <= t_stim + cfg.reaction_max_window_s)
        idxs = np.nonzero(sel)[0]
        latency = None
        for k in idxs:
            if trace.a[k] <= cfg.reaction_brake_accel and trace.a[k - 1] > cfg.reaction_brake_accel:
                latency = float(t[k] - t_stim)
                break
        reaction_truth.append({"stimulus_kind": kind, "t_stimulus": t_stim, "latency_s": latency})

    vis.sort(key=lambda e: (e.t, e.camera, e.kind))
    vis_out = [
        VisionEvent(float(vis_clock.to_unit(e.t)), e.camera, e.kind, e.attrs) for e in vis
    ]
    write_vision_jsonl(out_dir / "vision.jsonl", vis_out, {"epoch": script.epoch_utc, "unit": "vision"})

    # --- detour truth ---
    cache = DistanceCache(network)
    ei_first, ei_last = int(edge_idx[0]), int(edge_idx[-1])
    first_edge, last_edge = route_edge_ids[ei_first], route_edge_ids[ei_last]
    crossed = [first_edge]
    for k in range(len(edge_idx)):
        eid = int(route_edge_ids[edge_idx[k]])
        if eid != crossed[-1]:
            crossed.append(eid)
    off_first = float(np.clip(trace.s[0] - path.vertex_s[ei_first], 0.0, network.edges[first_edge].length_m))
    off_last = float(np.clip(trace.s[-1] - path.vertex_s[ei_last], 0.0, network.edges[last_edge].length_m))
    driven_net = float(trace.s[-1] - trace.s[0])
    shortest = position_distance(network, cache, first_edge, off_first, last_edge, off_last, directional=True)
    ratio = driven_net / shortest if (np.isfinite(shortest) and shortest > 50.0) else None
    lost = bool(ratio is not None and ratio > cfg.detour_ratio_threshold)
    if lost:
        add_truth("GettingLost", trace.launch_t, drive_end, ratio=ratio)

    truth = {
        "trip_id": script.trip_id,
        "driver_id": script.driver_id,
        "epoch_utc": script.epoch_utc,
        "seed": script.seed,
        "clock_models": {
            "telemetry": tel_clock.as_dict(),
            "vision": vis_clock.as_dict(),
        },
        "route_nodes": route_nodes,
        "route_edges": [int(e) for e in route_edge_ids],
        "edge_sequence_driven": crossed,
        "fix_truth": fix_truth,
        "events": sorted(truth_events, key=lambda e: (e["t_start"], e["kind"])),
        "reaction": reaction_truth,
        "detour": {
            "driven_m": driven_net,
            "shortest_m": float(shortest) if np.isfinite(shortest) else None,
            "ratio": ratio,
            "lost": lost,
        },
        "totals": {
            "distance_m": float(trace.s[-1] - trace.s[0]),
            "duration_s": float(t[-1]),
            "launch_t": float(trace.launch_t),
            "end_of_drive_t": float(drive_end),
        },
    }
    with open(out_dir / "truth.json", "w") as f:
        json.dump(truth, f, indent=1, sort_keys=True)
        f.write("\n")

    if write_network:
        save_network(network, out_dir / "network.json")
    return truth
