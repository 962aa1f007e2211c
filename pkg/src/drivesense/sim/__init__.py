"""Deterministic drive simulator: synthetic networks, scripted drives,
raw sensor streams, and ground truth for end-to-end validation."""

from .netgen import gen_network
from .script import DriveScript, InjectedEvent, load_script, save_script
from .synth import perturb_clock, synthesize

__all__ = [
    "gen_network",
    "DriveScript",
    "InjectedEvent",
    "load_script",
    "save_script",
    "synthesize",
    "perturb_clock",
]
