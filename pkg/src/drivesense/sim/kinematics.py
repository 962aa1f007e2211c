"""Drive kinematics: a filleted route geometry plus a forward-simulated
longitudinal controller.

The route polyline gets circular fillets at corners so heading (and thus
lateral acceleration) stays physical. The controller integrates speed at
the IMU rate, slowing for corners and stop directives, honoring scripted
acceleration overrides (harsh brakes, reaction decels), and recording an
effective acceleration that is exactly d(speed)/dt of the emitted speed
profile — the consistency the downstream fusion checks rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class _Straight:
    x0: float
    y0: float
    ux: float
    uy: float
    length: float
    edge_idx: int  # route edge owning this piece

    def sample(self, u):
        x = self.x0 + self.ux * u
        y = self.y0 + self.uy * u
        heading = math.atan2(self.uy, self.ux)
        return x, y, heading, 0.0


@dataclass
class _Arc:
    cx: float
    cy: float
    r: float
    ang0: float
    dang: float  # signed sweep; positive = CCW (left turn)
    length: float
    edge_in: int
    edge_out: int

    def sample(self, u):
        frac = u / self.length if self.length > 0 else 0.0
        ang = self.ang0 + self.dang * frac
        x = self.cx + self.r * math.cos(ang)
        y = self.cy + self.r * math.sin(ang)
        heading = ang + (math.pi / 2 if self.dang >= 0 else -math.pi / 2)
        curv = (1.0 if self.dang >= 0 else -1.0) / self.r
        return x, y, heading, curv

    def edge_at(self, u):
        return self.edge_in if u < self.length / 2 else self.edge_out


class PathGeometry:
    """Corner-filleted path through a sequence of xy waypoints."""

    def __init__(self, points_xy, corner_radius_m: float = 12.0):
        pts = np.asarray(points_xy, dtype=float)
        if len(pts) < 2:
            raise ValueError("need >= 2 waypoints")
        self.corner_radius_m = corner_radius_m
        segs = np.diff(pts, axis=0)
        seg_len = np.hypot(segs[:, 0], segs[:, 1])
        if (seg_len <= 0).any():
            raise ValueError("degenerate route leg")
        units = segs / seg_len[:, None]

        prims: list = []
        s_acc = 0.0
        vertex_s = [0.0] + [math.nan] * (len(pts) - 2) + [math.nan]
        cursor = pts[0].copy()
        for i in range(1, len(pts) - 1):
            u, v = units[i - 1], units[i]
            cross = u[0] * v[1] - u[1] * v[0]
            dot = float(np.clip(u @ v, -1.0, 1.0))
            theta = math.acos(dot)
            if abs(math.pi - theta) < 0.5:
                raise ValueError(f"route makes a near-U-turn at waypoint {i}")
            if theta < 1e-4:
                # straight-through vertex: no fillet, it lies on the current straight
                vertex_s[i] = s_acc + float(np.hypot(*(pts[i] - cursor)))
                continue
            tan_half = math.tan(theta / 2)
            setback = min(corner_radius_m * tan_half, 0.4 * seg_len[i - 1], 0.4 * seg_len[i])
            r = setback / tan_half
            a_start = pts[i] - u * setback
            # straight up to the fillet
            sl = float(np.hypot(*(a_start - cursor)))
            if sl > 1e-9:
                prims.append(_Straight(cursor[0], cursor[1], u[0], u[1], sl, i - 1))
                s_acc += sl
            left = cross > 0
            n = np.array([-u[1], u[0]]) if left else np.array([u[1], -u[0]])
            center = a_start + n * r
            ang0 = math.atan2(a_start[1] - center[1], a_start[0] - center[0])
            dang = theta if left else -theta
            arc_len = r * theta
            prims.append(_Arc(center[0], center[1], r, ang0, dang, arc_len, i - 1, i))
            vertex_s[i] = s_acc + arc_len / 2.0
            s_acc += arc_len
            cursor = pts[i] + v * setback
        # final straight
        sl = float(np.hypot(*(pts[-1] - cursor)))
        if sl > 1e-9:
            u = units[-1]
            prims.append(_Straight(cursor[0], cursor[1], u[0], u[1], sl, len(pts) - 2))
            s_acc += sl
        vertex_s[-1] = s_acc

        self.prims = prims
        self.cum = np.concatenate([[0.0], np.cumsum([p.length for p in prims])])
        self.total_length = float(self.cum[-1])
        self.vertex_s = vertex_s

    def prim_at(self, s: float):
        i = int(np.searchsorted(self.cum, s, side="right")) - 1
        i = min(max(i, 0), len(self.prims) - 1)
        return self.prims[i], s - self.cum[i]

    def sample(self, s: float):
        """(x, y, heading_rad, curvature_1pm) at arclength s (clamped)."""
        s = min(max(s, 0.0), self.total_length)
        prim, u = self.prim_at(s)
        return prim.sample(min(u, prim.length))

    def edge_index_at(self, s: float) -> int:
        """Route leg owning arclength s: leg j spans [vertex_s[j], vertex_s[j+1])."""
        s = min(max(s, 0.0), self.total_length)
        j = int(np.searchsorted(self.vertex_s, s, side="right")) - 1
        return min(max(j, 0), len(self.vertex_s) - 2)

    def sample_many(self, s_array):
        """Vectorized sample: arrays (x, y, heading, curvature, edge_idx)."""
        s = np.clip(np.asarray(s_array, dtype=float), 0.0, self.total_length)
        pi = np.clip(np.searchsorted(self.cum, s, side="right") - 1, 0, len(self.prims) - 1)
        u = s - self.cum[pi]
        x = np.empty_like(s)
        y = np.empty_like(s)
        heading = np.empty_like(s)
        curv = np.zeros_like(s)
        for k, prim in enumerate(self.prims):
            m = pi == k
            if not m.any():
                continue
            uu = np.minimum(u[m], prim.length)
            if isinstance(prim, _Straight):
                x[m] = prim.x0 + prim.ux * uu
                y[m] = prim.y0 + prim.uy * uu
                heading[m] = math.atan2(prim.uy, prim.ux)
            else:
                frac = uu / prim.length if prim.length > 0 else uu * 0.0
                ang = prim.ang0 + prim.dang * frac
                x[m] = prim.cx + prim.r * np.cos(ang)
                y[m] = prim.cy + prim.r * np.sin(ang)
                heading[m] = ang + (math.pi / 2 if prim.dang >= 0 else -math.pi / 2)
                curv[m] = (1.0 if prim.dang >= 0 else -1.0) / prim.r
        edge_idx = np.clip(
            np.searchsorted(self.vertex_s, s, side="right") - 1, 0, len(self.vertex_s) - 2
        ).astype(np.int64)
        return x, y, heading, curv, edge_idx

    def arcs(self):
        """[(s_start, s_end, radius)] of every fillet."""
        out = []
        for i, p in enumerate(self.prims):
            if isinstance(p, _Arc):
                out.append((float(self.cum[i]), float(self.cum[i + 1]), p.r))
        return out


@dataclass
class StopDirective:
    """Bring the vehicle to rest just before s_stop, hold until released."""

    s_stop: float
    kind: str                 # "red_light" | "stop_sign"
    red_on: float = 0.0       # red_light: red interval on the GPS timeline
    red_off: float = 0.0
    dwell_s: float = 1.2      # stop_sign: hold time at the line
    margin_m: float = 2.0
    reached_t: float | None = None
    released: bool = False

    def must_stop(self, t: float) -> bool:
        if self.released:
            return False
        if self.kind == "red_light":
            return self.red_on <= t < self.red_off
        return True

    def may_release(self, t: float) -> bool:
        if self.kind == "red_light":
            return t >= self.red_off
        if self.kind == "park":
            return False
        return self.reached_t is not None and t >= self.reached_t + self.dwell_s


@dataclass
class Override:
    """Forced longitudinal acceleration window (harsh brake, reaction...)."""

    t0: float
    t1: float
    accel: float


@dataclass
class DriveTrace:
    t: np.ndarray
    s: np.ndarray
    v: np.ndarray       # m/s
    a: np.ndarray       # effective dv/dt, m/s^2
    launch_t: float
    end_of_drive_t: float


@dataclass
class ControllerParams:
    cruise_mps: float = 15.0
    accel_rate: float = 1.5
    brake_rate_max: float = 2.8      # stays under the harsh-brake threshold
    corner_lat_target: float = 2.5   # m/s^2 on fillets, under the cornering threshold
    min_corner_speed: float = 3.0
    lookahead_m: float = 250.0


def simulate_drive(
    path: PathGeometry,
    dt: float,
    s_start: float,
    s_end: float,
    idle_before_s: float,
    idle_after_s: float,
    params: ControllerParams,
    overrides: list[Override] = (),
    stops: list[StopDirective] = (),
    max_duration_s: float = 3600.0,
) -> DriveTrace:
    arcs = path.arcs()
    overrides = sorted(overrides, key=lambda o: o.t0)
    stops = list(stops) + [StopDirective(s_stop=s_end, kind="park", margin_m=0.5)]
    stops.sort(key=lambda d: d.s_stop)

    ts, ss, vs, accs = [0.0], [s_start], [0.0], [0.0]
    t, s, v = 0.0, s_start, 0.0
    holding: StopDirective | None = None
    parked = False

    def corner_speed(r: float) -> float:
        return max(params.min_corner_speed, math.sqrt(params.corner_lat_target * r))

    while t < max_duration_s:
        if parked:
            break
        a_cmd = None
        if t < idle_before_s:
            a_cmd = 0.0
            v = 0.0
        else:
            for o in overrides:
                if o.t0 <= t < o.t1:
                    a_cmd = o.accel
                    break
        if a_cmd is None:
            a_cmd = params.accel_rate if v < params.cruise_mps else 0.0
            # corner slowdowns
            for (sa, sb, r) in arcs:
                if sa - s > params.lookahead_m:
                    break
                v_arc = corner_speed(r)
                if sa <= s <= sb:
                    a_cmd = min(a_cmd, -1.5 if v > v_arc * 1.03 else 0.0)
                elif s < sa and v > v_arc:
                    req = (v * v - v_arc * v_arc) / (2.0 * max(sa - s, 0.01))
                    if req >= 1.0:
                        a_cmd = min(a_cmd, -min(max(req * 1.15, 1.0), params.brake_rate_max))
            # stop directives
            if holding is not None:
                if holding.may_release(t):
                    holding.released = True
                    holding = None
                else:
                    a_cmd = 0.0
                    v = 0.0
            if holding is None:
                for d in stops:
                    if d.released or s > d.s_stop + 1.0:
                        continue
                    if not d.must_stop(t):
                        continue
                    d_rem = d.s_stop - d.margin_m - s
                    if d_rem <= 0.3 and v < 0.4:
                        holding = d
                        d.reached_t = t
                        a_cmd = 0.0
                        v = 0.0
                        if d.kind == "park":
                            parked = True
                        break
                    req = (v * v) / (2.0 * max(d_rem, 0.01))
                    if req >= 1.0:
                        a_cmd = min(a_cmd, -min(max(req * 1.2, 1.0), params.brake_rate_max + 0.4))

        v_new = min(max(v + a_cmd * dt, 0.0), params.cruise_mps)
        a_eff = (v_new - v) / dt
        s += (v + v_new) / 2.0 * dt
        v = v_new
        t += dt
        ts.append(t)
        ss.append(s)
        vs.append(v)
        accs.append(a_eff)

    end_of_drive = t
    n_idle = int(round(idle_after_s / dt))
    for _ in range(n_idle):
        t += dt
        ts.append(t)
        ss.append(s)
        vs.append(0.0)
        accs.append((0.0 - vs[-2]) / dt if vs[-2] > 0 else 0.0)

    return DriveTrace(
        t=np.array(ts),
        s=np.array(ss),
        v=np.array(vs),
        a=np.array(accs),
        launch_t=idle_before_s,
        end_of_drive_t=end_of_drive,
    )
