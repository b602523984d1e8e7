"""Virtual 10-actuator glove: layout, planar directions and cue quantization.

World frame used for 3D cues: x to the right, y up, z forward (away from the
wrist along the fingers, palm facing down). Hand coordinates (x, y) map onto
the world x-z plane with hand-y becoming world-z.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

ELEVATION_THRESHOLD_DEG = 22.5


class Actuator(enum.IntEnum):
    V1 = 1  # thumb tip
    V2 = 2  # index tip
    V3 = 3  # middle tip
    V4 = 4  # ring tip
    V5 = 5  # pinky tip
    V6 = 6  # index / middle gap
    V7 = 7  # middle / ring gap
    V8 = 8  # ring / pinky gap
    V9 = 9  # palm base, thumb side
    V10 = 10  # palm base, pinky side

    @property
    def role(self) -> str:
        if self <= 5:
            return "fingertip"
        if self <= 8:
            return "inter-finger"
        return "palm-base"


N_ACTUATORS = len(Actuator)


class _Token(enum.Enum):
    """Enum whose values are the kebab-case tokens used on the wire."""

    @classmethod
    def parse(cls, token: str):
        token = token.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == token:
                return member
        choices = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown {cls.__name__.lower()} {token!r} (expected one of: {choices})")

    def __str__(self) -> str:
        return self.value


class Direction(_Token):
    LEFT_TO_RIGHT = "left-to-right"
    RIGHT_TO_LEFT = "right-to-left"
    REAR_RIGHT_TO_FRONT_LEFT = "rear-right-to-front-left"
    FORWARD = "forward"
    REAR_LEFT_TO_FRONT_RIGHT = "rear-left-to-front-right"


class Gradient(_Token):
    UP = "up"
    FLAT = "flat"
    DOWN = "down"


@dataclass(frozen=True, order=False)
class Cue:
    direction: Direction
    gradient: Gradient

    def __str__(self) -> str:
        return f"{self.direction} {self.gradient}"


def all_cues() -> list[Cue]:
    """The 15 cues in canonical order (direction-major, declaration order)."""
    return [Cue(d, g) for d in Direction for g in Gradient]


# Normalized hand coordinates, palm down, x across the knuckles from the thumb
# side, y toward the fingertips.
HAND_LAYOUT: dict[Actuator, tuple[float, float]] = {
    Actuator.V1: (0.10, 0.80),
    Actuator.V2: (0.30, 0.95),
    Actuator.V3: (0.50, 0.95),
    Actuator.V4: (0.70, 0.95),
    Actuator.V5: (0.90, 0.95),
    Actuator.V6: (0.40, 0.65),
    Actuator.V7: (0.60, 0.65),
    Actuator.V8: (0.80, 0.65),
    Actuator.V9: (0.30, 0.10),
    Actuator.V10: (0.80, 0.10),
}

_CONTROL_POINTS: dict[Direction, tuple[Actuator, Actuator, Actuator]] = {
    Direction.LEFT_TO_RIGHT: (Actuator.V6, Actuator.V7, Actuator.V8),
    Direction.RIGHT_TO_LEFT: (Actuator.V8, Actuator.V7, Actuator.V6),
    Direction.REAR_RIGHT_TO_FRONT_LEFT: (Actuator.V10, Actuator.V7, Actuator.V2),
    Direction.FORWARD: (Actuator.V9, Actuator.V6, Actuator.V2),
    Direction.REAR_LEFT_TO_FRONT_RIGHT: (Actuator.V9, Actuator.V7, Actuator.V5),
}


def control_points(direction: Direction) -> tuple[Actuator, Actuator, Actuator]:
    """Activation order (T1, T2, T3) of the actuators for a planar direction."""
    return _CONTROL_POINTS[direction]


def direction_for_triple(triple: Sequence[int]) -> Direction | None:
    key = tuple(int(a) for a in triple)
    for direction, points in _CONTROL_POINTS.items():
        if tuple(int(a) for a in points) == key:
            return direction
    return None


def bearing(direction: Direction) -> float:
    """Planar bearing in radians, clockwise from forward (+z) toward +x.

    Taken from the layout as the vector from T1 to T3.
    """
    t1, _, t3 = control_points(direction)
    (x1, y1), (x3, y3) = HAND_LAYOUT[t1], HAND_LAYOUT[t3]
    return math.atan2(x3 - x1, y3 - y1)


def canonical_vector(cue: Cue, elevation_deg: float = 45.0) -> tuple[float, float, float]:
    """Unit 3D vector representing a cue: its bearing, tilted up/down by 45 degrees."""
    b = bearing(cue.direction)
    e = math.radians({Gradient.UP: elevation_deg, Gradient.FLAT: 0.0, Gradient.DOWN: -elevation_deg}[cue.gradient])
    return (math.cos(e) * math.sin(b), math.sin(e), math.cos(e) * math.cos(b))


def _angular_distance(a: float, b: float) -> float:
    d = abs(a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def quantize_vector(v: Sequence[float], threshold_deg: float = ELEVATION_THRESHOLD_DEG) -> Cue:
    """Snap an arbitrary 3D direction (x right, y up, z forward) to the nearest cue."""
    x, y, z = (float(c) for c in v)
    planar = math.hypot(x, z)
    if planar == 0.0 and y == 0.0:
        raise ValueError("degenerate direction: zero vector")
    elevation = math.degrees(math.atan2(y, planar))
    if elevation > threshold_deg:
        gradient = Gradient.UP
    elif elevation < -threshold_deg:
        gradient = Gradient.DOWN
    else:
        gradient = Gradient.FLAT
    if planar == 0.0:
        return Cue(Direction.FORWARD, gradient)
    heading = math.atan2(x, z)
    # min() keeps the first of equal candidates, i.e. declaration order
    direction = min(Direction, key=lambda d: _angular_distance(heading, bearing(d)))
    return Cue(direction, gradient)


def layout_rows() -> Iterator[tuple[str, float, float]]:
    for actuator in Actuator:
        x, y = HAND_LAYOUT[actuator]
        yield actuator.name, x, y


def layout_table() -> str:
    lines = ["actuator\tx\ty"]
    lines.extend(f"{name}\t{x:.2f}\t{y:.2f}" for name, x, y in layout_rows())
    return "\n".join(lines) + "\n"
