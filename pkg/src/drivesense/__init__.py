"""drivesense: in-vehicle sensing pipeline for driver behavior analytics.

Parses raw GNSS/IMU/OBD/vision streams, synchronizes them onto a GPS
timeline, detects driving events, map-matches trajectories to a road
network, and aggregates per-driver behavior indices. A deterministic
drive simulator provides ground truth for end-to-end validation.
"""

__version__ = "0.1.0"
