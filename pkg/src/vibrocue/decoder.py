"""Recover (scheme, cue) from a bare event list.

The decoder is a falsification oracle for the encoder: anything it cannot
attribute to exactly one (scheme, cue) is an error, never a best guess.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Sequence

from .encoder import DEFAULT_TIMING, Timeline, TimingConstants, VibrationEvent, pulse_counts, sort_events
from .glove import Cue, Gradient, direction_for_triple
from .intensity import DEFAULT_SCALE, IntensityScale, Scheme, gradient_levels

MEMORY_TOLERANCE = 1e-6
FILE_TOLERANCE = 1e-4


class DecodeError(ValueError):
    pass


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol


def _blocks(events: Sequence[VibrationEvent]) -> dict[int, list[VibrationEvent]]:
    blocks: dict[int, list[VibrationEvent]] = defaultdict(list)
    for e in events:
        blocks[e.actuator].append(e)
    for actuator, evs in blocks.items():
        for a, b in zip(evs, evs[1:]):
            if b.start < a.end:
                raise DecodeError(f"overlapping events on actuator V{actuator}")
    return blocks


def _cross_overlap(blocks: dict[int, list[VibrationEvent]]) -> bool:
    spans = [(e.start, e.end, a) for a, evs in blocks.items() for e in evs]
    spans.sort()
    # sweep: any event starting before the latest end of a different actuator
    latest: dict[int, float] = {}
    for start, end, a in spans:
        if any(other != a and start < e for other, e in latest.items()):
            return True
        latest[a] = max(latest.get(a, end), end)
    return False


def _match_gradient(values: Sequence[float], table: dict[Gradient, Sequence[float]], tol: float) -> Gradient:
    hits = [g for g, row in table.items() if all(_close(v, r, tol) for v, r in zip(values, row))]
    if len(hits) != 1:
        raise DecodeError("unknown gradient" if not hits else "ambiguous gradient")
    return hits[0]


def decode_events(
    events: Iterable[VibrationEvent],
    timing: TimingConstants = DEFAULT_TIMING,
    scale: IntensityScale = DEFAULT_SCALE,
    tol: float = MEMORY_TOLERANCE,
) -> tuple[Scheme, Cue]:
    events = sort_events(events)
    if not events:
        raise DecodeError("empty timeline")
    blocks = _blocks(events)

    order = sorted(blocks, key=lambda a: (blocks[a][0].start, a))
    direction = direction_for_triple(order)
    if direction is None:
        raise DecodeError("unknown direction")
    ordered = [blocks[a] for a in order]

    if _cross_overlap(blocks):
        if any(len(b) != 1 for b in ordered):
            raise DecodeError("unknown gradient")
        table = {
            g: [scale[k] for k in gradient_levels(Scheme.MOTION_INTENSITY, g)] for g in Gradient
        }
        gradient = _match_gradient([b[0].intensity for b in ordered], table, tol)
        return Scheme.MOTION_INTENSITY, Cue(direction, gradient)

    counts = tuple(len(b) for b in ordered)
    by_count = [g for g in Gradient if pulse_counts(g, timing.pulses_up) == counts]
    if len(by_count) != 1:
        raise DecodeError("unknown gradient")
    gradient = by_count[0]

    block_levels = []
    for b in ordered:
        first = b[0].intensity
        if any(not _close(e.intensity, first, tol) for e in b):
            raise DecodeError("unknown gradient")
        block_levels.append(first)

    candidates = []
    uniform = scale[timing.uniform_level]
    if all(_close(v, uniform, tol) for v in block_levels):
        candidates.append(Scheme.RABBIT_SINGLE)
    dual = [scale[k] for k in gradient_levels(Scheme.RABBIT_DUAL, gradient)]
    if all(_close(v, r, tol) for v, r in zip(block_levels, dual)):
        candidates.append(Scheme.RABBIT_DUAL)
    if not candidates:
        raise DecodeError("unknown gradient")
    if len(candidates) > 1:
        raise DecodeError("ambiguous scheme")
    return candidates[0], Cue(direction, gradient)


def decode(
    timeline: Timeline | Iterable[VibrationEvent],
    timing: TimingConstants = DEFAULT_TIMING,
    scale: IntensityScale = DEFAULT_SCALE,
    tol: float = MEMORY_TOLERANCE,
) -> tuple[Scheme, Cue]:
    """Infer scheme and cue from events only; declared labels are ignored."""
    events = timeline.events if isinstance(timeline, Timeline) else timeline
    return decode_events(events, timing, scale, tol)
