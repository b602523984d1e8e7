"""Within-subjects trial design, response scoring and Raw-TLX.

Trial shuffling uses a fixed generator so plans are reproducible anywhere:

* 64-bit LCG ``state = (6364136223846793005 * state + 1442695040888963407) mod 2**64``
* initial state ``(seed + 0x9E3779B97F4A7C15 * (participant + 1)) mod 2**64``
* a draw below ``m`` advances the state once and returns ``(state >> 33) % m``
* each block is a Fisher-Yates shuffle of the 15 cues in canonical order
  (for i = 14 down to 1, swap i with draw(i + 1)); blocks are shuffled in
  condition-position order, block 1 before block 2, from one stream.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .glove import Cue, Direction, Gradient, all_cues
from .intensity import Scheme

CONDITIONS = (Scheme.RABBIT_SINGLE, Scheme.RABBIT_DUAL, Scheme.MOTION_INTENSITY)
BLOCKS = 2
TRIALS_PER_CONDITION = BLOCKS * 15

TRIALS_HEADER = ["participant", "condition", "block", "trial", "direction", "gradient"]
RESPONSES_HEADER = ["participant", "condition", "block", "trial", "chosen_direction", "chosen_gradient"]
SUMMARY_HEADER = ["participant", "condition", "direction_pct", "gradient_pct"]

_MASK = (1 << 64) - 1


class Lcg64:
    A = 6364136223846793005
    C = 1442695040888963407

    def __init__(self, state: int):
        self.state = state & _MASK

    def below(self, m: int) -> int:
        self.state = (self.A * self.state + self.C) & _MASK
        return (self.state >> 33) % m

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


def balanced_latin_square(k: int) -> list[list[int]]:
    if k < 2:
        raise ValueError("a Latin square needs at least two conditions")
    base = [0]
    lo, hi = 1, k - 1
    take_lo = True
    while len(base) < k:
        if take_lo:
            base.append(lo)
            lo += 1
        else:
            base.append(hi)
            hi -= 1
        take_lo = not take_lo
    rows = [[(c + i) % k for c in base] for i in range(k)]
    if k % 2:
        rows += [row[::-1] for row in rows]
    return rows


@dataclass(frozen=True)
class Trial:
    participant: int
    condition: Scheme
    block: int
    trial: int  # 1..30 within the condition
    cue: Cue

    @property
    def key(self) -> tuple[int, Scheme, int, int]:
        return (self.participant, self.condition, self.block, self.trial)


@dataclass(frozen=True)
class TrialPlan:
    participant: int
    condition_order: tuple[Scheme, ...]
    trials: tuple[Trial, ...]

    def for_condition(self, scheme: Scheme) -> list[Trial]:
        return [t for t in self.trials if t.condition is scheme]


def generate_trials(participant: int, seed: int) -> TrialPlan:
    square = balanced_latin_square(len(CONDITIONS))
    order = tuple(CONDITIONS[c] for c in square[participant % len(square)])
    rng = Lcg64(seed + 0x9E3779B97F4A7C15 * (participant + 1))
    trials = []
    for scheme in order:
        n = 0
        for block in range(1, BLOCKS + 1):
            for cue in rng.shuffle(all_cues()):
                n += 1
                trials.append(Trial(participant, scheme, block, n, cue))
    return TrialPlan(participant, order, tuple(trials))


def trials_csv(plans: Iterable[TrialPlan]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRIALS_HEADER)
    for plan in plans:
        for t in plan.trials:
            w.writerow([t.participant, t.condition.value, t.block, t.trial, t.cue.direction.value, t.cue.gradient.value])
    return buf.getvalue()


def _rows(text: str, header: Sequence[str]) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    missing = set(header) - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"CSV is missing columns: {', '.join(sorted(missing))}")
    return list(reader)


def read_trials_csv(text: str) -> list[TrialPlan]:
    trials: dict[int, list[Trial]] = defaultdict(list)
    for row in _rows(text, TRIALS_HEADER):
        p = int(row["participant"])
        cue = Cue(Direction.parse(row["direction"]), Gradient.parse(row["gradient"]))
        trials[p].append(Trial(p, Scheme.parse(row["condition"]), int(row["block"]), int(row["trial"]), cue))
    plans = []
    for p, ts in sorted(trials.items()):
        order = tuple(dict.fromkeys(t.condition for t in ts))
        plans.append(TrialPlan(p, order, tuple(ts)))
    return plans


@dataclass(frozen=True)
class Response:
    participant: int
    condition: Scheme
    block: int
    trial: int
    chosen_direction: Direction
    chosen_gradient: Gradient

    @property
    def key(self) -> tuple[int, Scheme, int, int]:
        return (self.participant, self.condition, self.block, self.trial)


def responses_csv(responses: Iterable[Response]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESPONSES_HEADER)
    for r in responses:
        w.writerow([r.participant, r.condition.value, r.block, r.trial, r.chosen_direction.value, r.chosen_gradient.value])
    return buf.getvalue()


def read_responses_csv(text: str) -> list[Response]:
    return [
        Response(
            int(row["participant"]), Scheme.parse(row["condition"]), int(row["block"]), int(row["trial"]),
            Direction.parse(row["chosen_direction"]), Gradient.parse(row["chosen_gradient"]),
        )
        for row in _rows(text, RESPONSES_HEADER)
    ]


@dataclass(frozen=True)
class ConditionAccuracy:
    participant: int
    condition: Scheme
    direction_pct: float
    gradient_pct: float


def score(plans: TrialPlan | Iterable[TrialPlan], responses: Iterable[Response]) -> list[ConditionAccuracy]:
    """Percent correct per participant and condition, direction and gradient scored separately."""
    if isinstance(plans, TrialPlan):
        plans = [plans]
    trials = {t.key: t for plan in plans for t in plan.trials}
    seen: dict[tuple, Response] = {}
    for r in responses:
        if r.key not in trials:
            raise ValueError(f"response for unknown trial {r.key}")
        if r.key in seen:
            raise ValueError(f"duplicate response for trial {r.key}")
        seen[r.key] = r
    missing = trials.keys() - seen.keys()
    if missing:
        raise ValueError(f"{len(missing)} trial(s) have no response, e.g. {min(missing, key=str)}")

    tallies: dict[tuple[int, Scheme], list[int]] = defaultdict(lambda: [0, 0, 0])
    order: list[tuple[int, Scheme]] = []
    for key, t in trials.items():
        cell = (t.participant, t.condition)
        if cell not in tallies:
            order.append(cell)
        tally = tallies[cell]
        r = seen[key]
        tally[0] += r.chosen_direction is t.cue.direction
        tally[1] += r.chosen_gradient is t.cue.gradient
        tally[2] += 1
    return [
        ConditionAccuracy(p, c, 100.0 * tallies[p, c][0] / tallies[p, c][2], 100.0 * tallies[p, c][1] / tallies[p, c][2])
        for p, c in order
    ]


def summary_csv(summary: Iterable[ConditionAccuracy]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for s in summary:
        w.writerow([s.participant, s.condition.value, f"{s.direction_pct:.2f}", f"{s.gradient_pct:.2f}"])
    return buf.getvalue()


RTLX_SUBSCALES = ("mental", "physical", "temporal", "performance", "effort", "frustration")


@dataclass(frozen=True)
class RtlxScore:
    mental: float
    physical: float
    temporal: float
    performance: float
    effort: float
    frustration: float

    @property
    def score(self) -> float:
        return sum(getattr(self, name) for name in RTLX_SUBSCALES) / len(RTLX_SUBSCALES)


def rtlx(*subscales: float) -> RtlxScore:
    """Raw (unweighted) NASA-TLX from six 0-100 ratings."""
    if len(subscales) == 1 and not isinstance(subscales[0], (int, float)):
        subscales = tuple(subscales[0])
    if len(subscales) != 6:
        raise ValueError(f"Raw-TLX needs six ratings, got {len(subscales)}")
    for name, value in zip(RTLX_SUBSCALES, subscales):
        if not 0.0 <= value <= 100.0:
            raise ValueError(f"{name} rating {value} outside [0, 100]")
    return RtlxScore(*(float(v) for v in subscales))
