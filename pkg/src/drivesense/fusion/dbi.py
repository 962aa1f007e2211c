"""Driver Behavior Index reports and their merge algebra.

A report is a per-driver, per-period aggregate. Merging is a commutative
monoid: counts and miles add, reaction samples pool as sorted multisets
(so mean and p90 recomputed after any merge order are identical), and
weekly/monthly reports are exactly the merge of their days.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from datetime import date as _date
from datetime import datetime, timezone

COUNT_FIELDS = (
    "n_trips",
    "n_getting_lost",
    "n_signal_violations",
    "n_near_collisions",
    "n_distraction_episodes",
    "n_eyes_closed_episodes",
    "n_lane_crossings",
    "n_harsh_brakes",
    "n_brakes_with_prior_gaze_offroad",
)
MILE_FIELDS = ("miles", "highway_miles", "night_miles", "severe_weather_miles")

EVENT_COUNTERS = {
    "GettingLost": "n_getting_lost",
    "RedLightRun": "n_signal_violations",
    "StopSignViolation": "n_signal_violations",
    "NearCollisionEvent": "n_near_collisions",
    "DistractionEpisode": "n_distraction_episodes",
    "EyesClosedEpisode": "n_eyes_closed_episodes",
    "LaneCrossingEvent": "n_lane_crossings",
}


@dataclass
class DbiReport:
    driver_id: str
    period_kind: str  # "day" | "week" | "month"
    period_id: str
    n_trips: int = 0
    miles: float = 0.0
    highway_miles: float = 0.0
    night_miles: float = 0.0
    severe_weather_miles: float = 0.0
    n_getting_lost: int = 0
    n_signal_violations: int = 0
    n_near_collisions: int = 0
    n_distraction_episodes: int = 0
    n_eyes_closed_episodes: int = 0
    n_lane_crossings: int = 0
    n_harsh_brakes: int = 0
    n_brakes_with_prior_gaze_offroad: int = 0
    reaction_samples: dict = field(default_factory=dict)  # kind -> sorted [latency_s]
    reaction_missed: dict = field(default_factory=dict)   # kind -> count

    def count_event(self, kind: str):
        attr = EVENT_COUNTERS.get(kind)
        if attr is not None:
            setattr(self, attr, getattr(self, attr) + 1)

    def add_reaction(self, samples, missed):
        for s in samples:
            lst = self.reaction_samples.setdefault(s.stimulus_kind, [])
            lst.append(float(s.latency_s))
            lst.sort()
        for m in missed:
            self.reaction_missed[m.stimulus_kind] = self.reaction_missed.get(m.stimulus_kind, 0) + 1

    def reaction_stats(self) -> dict:
        out = {}
        kinds = sorted(set(self.reaction_samples) | set(self.reaction_missed))
        for kind in kinds:
            samples = self.reaction_samples.get(kind, [])
            n = len(samples)
            stats = {"n_samples": n, "n_missed": self.reaction_missed.get(kind, 0)}
            if n:
                stats["mean_latency_s"] = sum(samples) / n
                stats["p90_latency_s"] = samples[max(0, -(-9 * n // 10) - 1)]  # nearest-rank ceil(0.9n)
            else:
                stats["mean_latency_s"] = None
                stats["p90_latency_s"] = None
            out[kind] = stats
        return out

    def content_equal(self, other: "DbiReport", miles_tol: float = 1e-9) -> bool:
        if any(getattr(self, f) != getattr(other, f) for f in COUNT_FIELDS):
            return False
        for f in MILE_FIELDS:
            a, b = getattr(self, f), getattr(other, f)
            if abs(a - b) > miles_tol * max(1.0, abs(a), abs(b)):
                return False
        return self.reaction_samples == other.reaction_samples and self.reaction_missed == other.reaction_missed

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "DbiReport":
        return cls(**d)


def merge_reports(reports, period_kind=None, period_id=None) -> DbiReport:
    """Merge same-driver reports; associative and commutative in content."""
    reports = list(reports)
    if not reports:
        raise ValueError("nothing to merge")
    drivers = {r.driver_id for r in reports}
    if len(drivers) != 1:
        raise ValueError(f"cannot merge reports across drivers: {sorted(drivers)}")
    first = reports[0]
    out = DbiReport(
        driver_id=first.driver_id,
        period_kind=period_kind or first.period_kind,
        period_id=period_id or first.period_id,
    )
    for r in reports:
        for f in COUNT_FIELDS:
            setattr(out, f, getattr(out, f) + getattr(r, f))
        for f in MILE_FIELDS:
            setattr(out, f, getattr(out, f) + getattr(r, f))
        for kind, samples in r.reaction_samples.items():
            out.reaction_samples.setdefault(kind, []).extend(samples)
        for kind, n in r.reaction_missed.items():
            out.reaction_missed[kind] = out.reaction_missed.get(kind, 0) + n
    for kind in out.reaction_samples:
        out.reaction_samples[kind].sort()
    return out


def date_of_t(epoch_unix: float, t: float, tz_offset_hours: float = 0.0) -> _date:
    return datetime.fromtimestamp(epoch_unix + t + tz_offset_hours * 3600.0, tz=timezone.utc).date()


def period_id_for(day: _date, kind: str) -> str:
    if kind == "day":
        return day.isoformat()
    if kind == "week":
        y, w, _ = day.isocalendar()
        return f"{y}-W{w:02d}"
    if kind == "month":
        return f"{day.year:04d}-{day.month:02d}"
    raise ValueError(f"unknown period kind '{kind}'")


def daily_rollups(daily_reports, kind: str) -> list[DbiReport]:
    """Merge day reports into week or month reports."""
    groups: dict[str, list[DbiReport]] = {}
    for r in daily_reports:
        if r.period_kind != "day":
            raise ValueError("rollups start from day reports")
        day = _date.fromisoformat(r.period_id)
        groups.setdefault(period_id_for(day, kind), []).append(r)
    return [
        merge_reports(groups[pid], period_kind=kind, period_id=pid) for pid in sorted(groups)
    ]
