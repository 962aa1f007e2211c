"""Event fusion and Driver Behavior Index aggregation."""

from .events import DetectedEvent, locate_events, severity_for
from .trips import Trip, segment_trips
from .reaction import MissedStimulus, ReactionSample, extract_stimuli, reaction_time
from .compliance import signal_compliance
from .braking import annotate_braking
from .travel import TravelStats, WeatherRecord, load_weather, travel_pattern
from .dbi import DbiReport, daily_rollups, merge_reports, period_id_for

__all__ = [
    "DetectedEvent",
    "locate_events",
    "severity_for",
    "Trip",
    "segment_trips",
    "ReactionSample",
    "MissedStimulus",
    "extract_stimuli",
    "reaction_time",
    "signal_compliance",
    "annotate_braking",
    "WeatherRecord",
    "TravelStats",
    "load_weather",
    "travel_pattern",
    "DbiReport",
    "merge_reports",
    "daily_rollups",
    "period_id_for",
]
