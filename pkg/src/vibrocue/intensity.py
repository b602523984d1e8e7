"""JND-spaced intensity ladder and per-gradient level codings."""

from __future__ import annotations

from dataclasses import dataclass

from .glove import Gradient, _Token

DEFAULT_BASE = 0.22
DEFAULT_JND = 0.3
DEFAULT_LEVELS = 7


class Scheme(_Token):
    RABBIT_SINGLE = "rabbit-single"
    RABBIT_DUAL = "rabbit-dual"
    MOTION_INTENSITY = "motion-intensity"


@dataclass(frozen=True)
class IntensityScale:
    base: float
    jnd: float
    levels: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.levels)

    def level(self, k: int) -> float:
        """Intensity of level ``k``, 1-based (S1 is ``level(1)``)."""
        if not 1 <= k <= len(self.levels):
            raise IndexError(f"level {k} outside 1..{len(self.levels)}")
        return self.levels[k - 1]

    def __getitem__(self, k: int) -> float:
        return self.level(k)


def build_scale(base: float = DEFAULT_BASE, jnd: float = DEFAULT_JND, n: int = DEFAULT_LEVELS) -> IntensityScale:
    """Geometric ladder ``min(1, base * (1 + jnd) ** (k - 1))`` for k = 1..n."""
    if not 0.0 < base <= 1.0:
        raise ValueError(f"base intensity must lie in (0, 1], got {base}")
    if jnd <= 0.0:
        raise ValueError(f"jnd must be positive, got {jnd}")
    if n < 1:
        raise ValueError(f"need at least one level, got {n}")
    levels = tuple(min(1.0, base * (1.0 + jnd) ** (k - 1)) for k in range(1, n + 1))
    return IntensityScale(base=base, jnd=jnd, levels=levels)


DEFAULT_SCALE = build_scale()

_UP_LEVELS = {
    Scheme.RABBIT_DUAL: (1, 3, 6),
    Scheme.MOTION_INTENSITY: (1, 4, 6),
}


def gradient_levels(scheme: Scheme, gradient: Gradient) -> tuple[int, int, int]:
    """Level indices for control points T1..T3 of an intensity-coded scheme."""
    if scheme not in _UP_LEVELS:
        raise ValueError(f"{scheme} has uniform intensity")
    up = _UP_LEVELS[scheme]
    if gradient is Gradient.UP:
        return up
    if gradient is Gradient.DOWN:
        return up[::-1]
    return (up[1],) * 3
