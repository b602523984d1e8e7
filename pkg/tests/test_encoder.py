import hashlib
import itertools
from collections import defaultdict

import pytest

from vibrocue.encoder import DEFAULT_TIMING, Timeline, TimingConstants, encode, pulse_counts, soa
from vibrocue.glove import Actuator, Cue, Direction, Gradient, all_cues, control_points
from vibrocue.intensity import DEFAULT_SCALE, Scheme

S = DEFAULT_SCALE
ALL = list(itertools.product(Scheme, all_cues()))


def test_pulse_counts():
    assert pulse_counts(Gradient.UP) == (2, 4, 6)
    assert pulse_counts(Gradient.DOWN) == (6, 4, 2)
    assert pulse_counts(Gradient.FLAT) == (4, 4, 4)


def test_soa():
    assert soa(450) == pytest.approx(191.3, abs=1e-9)
    assert soa(100) == pytest.approx(79.3, abs=1e-9)
    # intercept of the affine law
    assert 0.32 * 0 + 47.3 == 47.3
    for bad in (0, -5):
        with pytest.raises(ValueError):
            soa(bad)


def _onsets(tl):
    out = defaultdict(list)
    for e in tl.events:
        out[e.actuator].append(e.start)
    return out


def test_rabbit_single_forward_up_schedule():
    tl = encode(Cue(Direction.FORWARD, Gradient.UP), Scheme.RABBIT_SINGLE)
    on = _onsets(tl)
    assert on[9] == [0, 175]
    assert on[6] == [400, 575, 750, 925]
    assert on[2] == [1150, 1325, 1500, 1675, 1850, 2025]
    assert tl.total == 2150.0
    assert all(e.duration == 125 for e in tl.events)
    assert {e.intensity for e in tl.events} == {S[4]}


def test_motion_forward_up_schedule():
    tl = encode(Cue(Direction.FORWARD, Gradient.UP), Scheme.MOTION_INTENSITY)
    assert [(e.actuator, e.start, e.duration) for e in tl.events] == [(9, 0.0, 450), (6, 191.3, 450), (2, 382.6, 450)]
    assert [e.intensity for e in tl.events] == [S[1], S[4], S[6]]
    assert tl.total == 832.6


def test_rabbit_dual_flat_left_to_right():
    tl = encode(Cue(Direction.LEFT_TO_RIGHT, Gradient.FLAT), Scheme.RABBIT_DUAL)
    assert len(tl.events) == 12
    assert {e.intensity for e in tl.events} == {S[3]}
    assert {e.actuator for e in tl.events} == {6, 7, 8}
    counts = [len(_onsets(tl)[a]) for a in (6, 7, 8)]
    assert counts == [4, 4, 4]


def test_rabbit_dual_up_intensities():
    tl = encode(Cue(Direction.FORWARD, Gradient.UP), Scheme.RABBIT_DUAL)
    per_act = {e.actuator: e.intensity for e in tl.events}
    assert (per_act[9], per_act[6], per_act[2]) == (S[1], S[3], S[6])


@pytest.mark.parametrize("scheme,cue", ALL, ids=lambda x: str(x))
def test_timeline_invariants(scheme, cue):
    tl = encode(cue, scheme)
    keys = [(e.start, e.actuator) for e in tl.events]
    assert keys == sorted(keys)
    assert {Actuator(e.actuator) for e in tl.events} <= set(control_points(cue.direction))
    assert tl.total == round(max(e.start + e.duration for e in tl.events), 1)
    by_act = defaultdict(list)
    for e in tl.events:
        assert e.duration > 0 and 0 < e.intensity <= 1
        by_act[e.actuator].append(e)
    for evs in by_act.values():
        for a, b in zip(evs, evs[1:]):
            assert a.start + a.duration <= b.start
    if scheme is Scheme.MOTION_INTENSITY:
        assert len(tl.events) == 3
        for a, b in zip(tl.events, tl.events[1:]):
            assert a.end - b.start == pytest.approx(450 - 191.3, abs=1e-9)
    else:
        assert len(tl.events) == 12
        blocks = [by_act[int(a)] for a in control_points(cue.direction)]
        for prev, nxt in zip(blocks, blocks[1:]):
            assert nxt[0].start - prev[-1].end == pytest.approx(DEFAULT_TIMING.ibi)
        for block in blocks:
            for a, b in zip(block, block[1:]):
                assert b.start - a.end == pytest.approx(DEFAULT_TIMING.isi)


@pytest.mark.parametrize("cue", all_cues(), ids=str)
def test_single_and_dual_share_schedule(cue):
    a = encode(cue, Scheme.RABBIT_SINGLE)
    b = encode(cue, Scheme.RABBIT_DUAL)
    assert [e[:3] for e in a.events] == [e[:3] for e in b.events]


def test_serialization_is_canonical_and_deterministic():
    digests = set()
    for _ in range(3):
        text = encode(Cue(Direction.FORWARD, Gradient.UP), Scheme.MOTION_INTENSITY).to_json()
        digests.add(hashlib.sha256(text.encode()).hexdigest())
    assert len(digests) == 1
    assert '"start_ms": 191.3' in text
    assert '"intensity": 0.4833' in text
    assert text.index('"scheme"') < text.index('"direction"') < text.index('"gradient"') < text.index('"total_ms"') < text.index('"events"')


@pytest.mark.parametrize("scheme,cue", ALL, ids=lambda x: str(x))
def test_json_round_trip(scheme, cue):
    tl = encode(cue, scheme)
    back = Timeline.from_json(tl.to_json())
    assert back.scheme is scheme and back.cue == cue
    assert back.to_json() == tl.to_json()
    for a, b in zip(tl.events, back.events):
        assert a.actuator == b.actuator and a.start == b.start and a.duration == b.duration
        assert abs(a.intensity - b.intensity) <= 5e-5


def test_malformed_document():
    with pytest.raises(ValueError, match="malformed"):
        Timeline.from_json("{not json")
    with pytest.raises(ValueError, match="malformed"):
        Timeline.from_json('{"scheme": "rabbit-single"}')


def test_timing_constants_validation():
    with pytest.raises(ValueError):
        TimingConstants(bd=0)
    with pytest.raises(ValueError):
        TimingConstants(pulses_up=(0, 4, 8))


def test_custom_pulse_polarity():
    # the opposite reading of the pulse coding, exposed as configuration
    timing = TimingConstants(pulses_up=(6, 4, 2))
    tl = encode(Cue(Direction.FORWARD, Gradient.UP), Scheme.RABBIT_SINGLE, timing)
    assert [e.actuator for e in tl.events].count(9) == 6
