"""Vibrotactile encoding of 3D directional cues on a 10-actuator glove."""

from .decoder import DecodeError, decode
from .encoder import Timeline, TimingConstants, VibrationEvent, encode, pulse_counts, soa
from .glove import Actuator, Cue, Direction, Gradient, all_cues, control_points, quantize_vector
from .intensity import IntensityScale, Scheme, build_scale, gradient_levels
from .stream import Frame, RenderConfig, render, render_text

__all__ = [
    "Actuator", "Cue", "DecodeError", "Direction", "Frame", "Gradient", "IntensityScale",
    "RenderConfig", "Scheme", "Timeline", "TimingConstants", "VibrationEvent", "all_cues",
    "build_scale", "control_points", "decode", "encode", "gradient_levels", "pulse_counts",
    "quantize_vector", "render", "render_text", "soa",
]

__version__ = "0.1.0"
