"""Clock synchronization across sensing units.

Each unit stamps records with its own clock. RMC sentences pair the
unit's receipt time with GPS time, giving anchor points for an affine
clock model (offset + drift); multi-year deployments make drift worth
fitting. Applying a model re-expresses a stream on the GPS timeline.

When a unit has no GPS anchors, an offset-only model can be estimated by
cross-correlating a shared observable (e.g. OBD speed against
GNSS-derived speed) — same contract, coarser accuracy.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateFit, InsufficientAnchors, TooFewSamples
from .records import GnssFix, ImuStream

MAX_PLAUSIBLE_DRIFT_PPM = 500.0


@dataclass
class ClockModel:
    """Affine map between a unit clock and GPS time:
    t_unit = offset_s + (1 + drift_ppm*1e-6) * t_gps."""

    offset_s: float
    drift_ppm: float
    rms_residual_s: float = 0.0
    n_anchors: int = 2

    def to_gps(self, t_unit):
        return (np.asarray(t_unit, dtype=float) - self.offset_s) / (1.0 + self.drift_ppm * 1e-6)

    def to_unit(self, t_gps):
        return np.asarray(t_gps, dtype=float) * (1.0 + self.drift_ppm * 1e-6) + self.offset_s

    def as_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    @classmethod
    def identity(cls):
        return cls(offset_s=0.0, drift_ppm=0.0, rms_residual_s=0.0, n_anchors=2)


@dataclass
class SyncedStream:
    """A stream whose record times are GPS seconds. records is either a
    list of record objects (with .t) or a columnar ImuStream."""

    records: object
    source_unit: str = ""
    model: Optional[ClockModel] = None

    def times(self) -> np.ndarray:
        if isinstance(self.records, ImuStream):
            return self.records.t
        return np.array([r.t for r in self.records], dtype=float)

    def __len__(self):
        return len(self.records)


def estimate_clock_model(anchors) -> ClockModel:
    """Least-squares affine fit of unit time against GPS time.

    anchors: sequence of (t_unit, t_gps) pairs.
    """
    anchors = list(anchors)
    if len(anchors) < 2:
        raise InsufficientAnchors(f"need >= 2 anchors, got {len(anchors)}")
    t_unit = np.array([a[0] for a in anchors], dtype=float)
    t_gps = np.array([a[1] for a in anchors], dtype=float)
    if len(set(t_unit.tolist())) < 2:
        raise InsufficientAnchors("anchors must have distinct unit times")
    mx = t_gps.mean()
    x = t_gps - mx
    denom = float(x @ x)
    if denom == 0.0:
        raise DegenerateFit("all anchors at one GPS instant")
    slope = float(x @ (t_unit - t_unit.mean())) / denom
    intercept = float(t_unit.mean()) - slope * mx  # offset in t_unit = intercept + slope*t_gps
    drift_ppm = (slope - 1.0) * 1e6
    if abs(drift_ppm) >= MAX_PLAUSIBLE_DRIFT_PPM:
        raise DegenerateFit(f"fitted drift {drift_ppm:.1f} ppm is implausible")
    resid = t_unit - (intercept + slope * t_gps)
    rms = float(np.sqrt(np.mean(resid**2)))
    return ClockModel(offset_s=intercept, drift_ppm=drift_ppm, rms_residual_s=rms, n_anchors=len(anchors))


def apply_sync(records, model: ClockModel, source_unit: str = "") -> SyncedStream:
    """Re-express a stream on GPS time. Order is preserved (the map is
    affine with positive slope)."""
    if isinstance(records, ImuStream):
        synced = records.with_times(model.to_gps(records.t))
        return SyncedStream(records=synced, source_unit=source_unit, model=model)
    out = []
    for r in records:
        out.append(dataclasses.replace(r, t=float(model.to_gps(r.t))))
    return SyncedStream(records=out, source_unit=source_unit, model=model)


def anchors_from_rmc(fixes, epoch_utc_s: float = 0.0):
    """Extract (t_unit, t_gps) anchor pairs from RMC-derived fixes.

    t_gps is expressed relative to the trip epoch so that fits stay
    well-conditioned.
    """
    out = []
    for f in fixes:
        if isinstance(f, GnssFix) and f.utc_s is not None:
            out.append((f.t, f.utc_s - epoch_utc_s))
    return out


def resample_uniform(times, values, rate_hz: float):
    """Linear interpolation onto a uniform grid spanning [first, last].

    values may be (N,) or (N, k). Never extrapolates past the endpoints.
    """
    if rate_hz <= 0:
        raise ValueError("rate_hz must be positive")
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(times) < 2:
        raise TooFewSamples(f"need >= 2 samples, got {len(times)}")
    n = int(np.floor((times[-1] - times[0]) * rate_hz + 1e-9)) + 1
    grid = times[0] + np.arange(n) / rate_hz
    if values.ndim == 1:
        out = np.interp(grid, times, values)
    else:
        out = np.column_stack([np.interp(grid, times, values[:, j]) for j in range(values.shape[1])])
    return grid, out


def estimate_offset_by_correlation(
    ref_times, ref_values, unit_times, unit_values, max_lag_s: float = 10.0, grid_hz: float = 10.0
) -> ClockModel:
    """Offset-only fallback: find the lag of a unit-clock series against a
    GPS-clock reference observing the same physical signal.

    Returns a ClockModel with drift 0 such that to_gps(unit time) aligns
    the two series.
    """
    ref_times = np.asarray(ref_times, dtype=float)
    unit_times = np.asarray(unit_times, dtype=float)
    if len(ref_times) < 2 or len(unit_times) < 2:
        raise TooFewSamples("need >= 2 samples per series")
    dt = 1.0 / grid_hz
    lo = min(ref_times[0], unit_times[0]) - max_lag_s
    hi = max(ref_times[-1], unit_times[-1]) + max_lag_s
    grid = np.arange(lo, hi + dt, dt)
    a = np.interp(grid, ref_times, np.asarray(ref_values, dtype=float), left=np.nan, right=np.nan)
    b = np.interp(grid, unit_times, np.asarray(unit_values, dtype=float), left=np.nan, right=np.nan)
    max_shift = int(round(max_lag_s / dt))
    best = (-np.inf, 0)
    for shift in range(-max_shift, max_shift + 1):
        # unit series shifted left by `shift` samples overlaps ref
        if shift >= 0:
            aa, bb = a[: len(a) - shift or None], b[shift:]
        else:
            aa, bb = a[-shift:], b[: len(b) + shift]
        mask = np.isfinite(aa) & np.isfinite(bb)
        if mask.sum() < 8:
            continue
        x, y = aa[mask], bb[mask]
        x = x - x.mean()
        y = y - y.mean()
        denom = np.sqrt((x @ x) * (y @ y))
        if denom == 0:
            continue
        score = float(x @ y / denom)
        if score > best[0]:
            best = (score, shift)
    if not np.isfinite(best[0]):
        raise DegenerateFit("no overlapping signal for correlation")
    # a[i] pairs with b[i+shift]; both match physically when shift*dt == offset
    offset = best[1] * dt
    return ClockModel(offset_s=offset, drift_ppm=0.0, rms_residual_s=dt / 2, n_anchors=0)
