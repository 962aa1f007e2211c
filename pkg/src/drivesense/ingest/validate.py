"""Stream sanity checks: timestamp order, gaps, and record invariants."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..records import ACCEL_SANITY_MS2, ImuStream

NON_MONOTONIC = "NonMonotonic"
GAP = "Gap"
INVARIANT = "InvariantViolation"


@dataclass
class Finding:
    kind: str
    index: int
    detail: str


@dataclass
class ValidationReport:
    n_records: int = 0
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self):
        return not self.findings

    def counts(self):
        out: dict[str, int] = {}
        for f in self.findings:
            out[f.kind] = out.get(f.kind, 0) + 1
        return out

    def summary(self):
        return {"n_records": self.n_records, "ok": self.ok, "counts": self.counts()}


def _validate_times(t: np.ndarray, gap_threshold_s: float, report: ValidationReport):
    if len(t) < 2:
        return
    dt = np.diff(t)
    for i in np.nonzero(dt <= 0)[0]:
        report.findings.append(Finding(NON_MONOTONIC, int(i + 1), f"t={t[i + 1]:.6f} after t={t[i]:.6f}"))
    for i in np.nonzero(dt > gap_threshold_s)[0]:
        report.findings.append(Finding(GAP, int(i + 1), f"{dt[i]:.3f} s gap"))


def validate_stream(records, gap_threshold_s: float = 5.0) -> ValidationReport:
    """Check a record sequence (or columnar ImuStream) without mutating it."""
    report = ValidationReport()
    if isinstance(records, ImuStream):
        report.n_records = len(records)
        _validate_times(records.t, gap_threshold_s, report)
        bad = ~np.isfinite(records.accel).all(axis=1)
        bad |= ~np.isfinite(records.gyro).all(axis=1)
        bad |= ~np.isfinite(records.mag).all(axis=1)
        for i in np.nonzero(bad)[0]:
            report.findings.append(Finding(INVARIANT, int(i), "non-finite component"))
        over = np.linalg.norm(records.accel, axis=1) >= ACCEL_SANITY_MS2
        for i in np.nonzero(over & ~bad)[0]:
            report.findings.append(Finding(INVARIANT, int(i), f"|accel| >= {ACCEL_SANITY_MS2}"))
        return report

    records = list(records)
    report.n_records = len(records)
    if records:
        _validate_times(np.array([r.t for r in records], dtype=float), gap_threshold_s, report)
    for i, r in enumerate(records):
        check = getattr(r, "validate", None)
        if check is None:
            continue
        try:
            check()
        except ValueError as e:
            report.findings.append(Finding(INVARIANT, i, str(e)))
    return report
