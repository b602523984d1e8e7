"""Timeline synthesis for the three encoding schemes.

Times are milliseconds kept at one decimal place. Rabbit timing treats the
inter-stimulus and inter-burst intervals as gaps (offset to next onset).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .glove import Actuator, Cue, Direction, Gradient, control_points
from .intensity import DEFAULT_SCALE, IntensityScale, Scheme, gradient_levels

DEFAULT_PULSES_UP = (2, 4, 6)
MAX_PULSES = 7


@dataclass(frozen=True)
class TimingConstants:
    bd: float = 125.0
    isi: float = 50.0
    ibi: float = 100.0
    d: float = 450.0
    uniform_level: int = 4
    pulses_up: tuple[int, int, int] = field(default=DEFAULT_PULSES_UP)

    def __post_init__(self):
        for name in ("bd", "isi", "ibi", "d"):
            if getattr(self, name) <= 0:
                raise ValueError(f"timing constant {name} must be positive")
        if self.uniform_level < 1:
            raise ValueError("uniform_level is a 1-based level index")
        if len(self.pulses_up) != 3 or not all(1 <= n <= MAX_PULSES for n in self.pulses_up):
            raise ValueError(f"pulse counts must be three values in 1..{MAX_PULSES}")


DEFAULT_TIMING = TimingConstants()


class VibrationEvent(NamedTuple):
    actuator: int
    start: float
    duration: float
    intensity: float

    @property
    def end(self) -> float:
        return self.start + self.duration


@dataclass(frozen=True)
class Timeline:
    scheme: Scheme
    cue: Cue
    events: tuple[VibrationEvent, ...]

    @property
    def total(self) -> float:
        if not self.events:
            return 0.0
        return _ms(max(e.end for e in self.events))

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "direction": self.cue.direction.value,
            "gradient": self.cue.gradient.value,
            "total_ms": _num(self.total),
            "events": [
                {
                    "actuator": int(e.actuator),
                    "start_ms": _num(e.start),
                    "duration_ms": _num(e.duration),
                    "intensity": _num(e.intensity),
                }
                for e in self.events
            ],
        }

    def to_json(self) -> str:
        """Canonical, byte-stable JSON document."""
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> Timeline:
        try:
            events = [
                VibrationEvent(int(e["actuator"]), float(e["start_ms"]), float(e["duration_ms"]), float(e["intensity"]))
                for e in doc["events"]
            ]
            cue = Cue(Direction.parse(doc["direction"]), Gradient.parse(doc["gradient"]))
            scheme = Scheme.parse(doc["scheme"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed timeline document: {exc!r}") from None
        return cls(scheme, cue, sort_events(events))

    @classmethod
    def from_json(cls, text: str) -> Timeline:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed timeline document: {exc}") from None
        return cls.from_dict(doc)


def _ms(t: float) -> float:
    return round(t, 1)


def _num(x: float) -> float:
    return round(float(x), 4)


def sort_events(events: Iterable[VibrationEvent]) -> tuple[VibrationEvent, ...]:
    return tuple(sorted(events, key=lambda e: (e.start, e.actuator)))


def pulse_counts(gradient: Gradient, up: tuple[int, int, int] = DEFAULT_PULSES_UP) -> tuple[int, int, int]:
    if gradient is Gradient.UP:
        return tuple(up)
    if gradient is Gradient.DOWN:
        return tuple(up[::-1])
    return (up[1],) * 3


def soa(d: float) -> float:
    """Stimulus onset asynchrony for apparent motion with vibration period ``d`` ms."""
    if d <= 0:
        raise ValueError(f"vibration period must be positive, got {d}")
    return 0.32 * d + 47.3


def _rabbit_events(points, counts, intensities, timing: TimingConstants) -> list[VibrationEvent]:
    events = []
    block_start = 0.0
    for actuator, n, level in zip(points, counts, intensities):
        for j in range(n):
            events.append(VibrationEvent(int(actuator), _ms(block_start + j * (timing.bd + timing.isi)), timing.bd, level))
        block_end = block_start + n * timing.bd + (n - 1) * timing.isi
        block_start = block_end + timing.ibi
    return events


def encode(
    cue: Cue,
    scheme: Scheme,
    timing: TimingConstants = DEFAULT_TIMING,
    scale: IntensityScale = DEFAULT_SCALE,
) -> Timeline:
    points = control_points(cue.direction)
    if scheme is Scheme.MOTION_INTENSITY:
        step = soa(timing.d)
        levels = gradient_levels(scheme, cue.gradient)
        events = [
            VibrationEvent(int(a), _ms(i * step), timing.d, scale[k])
            for i, (a, k) in enumerate(zip(points, levels))
        ]
    else:
        counts = pulse_counts(cue.gradient, timing.pulses_up)
        if scheme is Scheme.RABBIT_SINGLE:
            intensities = (scale[timing.uniform_level],) * 3
        else:
            intensities = tuple(scale[k] for k in gradient_levels(scheme, cue.gradient))
        events = _rabbit_events(points, counts, intensities, timing)
    return Timeline(scheme, cue, sort_events(events))


def actuators_of(timeline: Timeline) -> set[Actuator]:
    return {Actuator(e.actuator) for e in timeline.events}
