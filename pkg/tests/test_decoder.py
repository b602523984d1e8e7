import itertools

import pytest
from hypothesis import given, strategies as st

from vibrocue.decoder import FILE_TOLERANCE, DecodeError, decode
from vibrocue.encoder import Timeline, TimingConstants, VibrationEvent, encode
from vibrocue.glove import Cue, Direction, Gradient, all_cues
from vibrocue.intensity import DEFAULT_SCALE, Scheme

ALL = list(itertools.product(Scheme, all_cues()))


@pytest.mark.parametrize("scheme,cue", ALL, ids=lambda x: str(x))
def test_round_trip(scheme, cue):
    assert decode(encode(cue, scheme)) == (scheme, cue)


@pytest.mark.parametrize("scheme,cue", ALL, ids=lambda x: str(x))
def test_round_trip_through_file(scheme, cue):
    tl = Timeline.from_json(encode(cue, scheme).to_json())
    assert decode(tl, tol=FILE_TOLERANCE) == (scheme, cue)


def test_examples():
    assert decode(encode(Cue(Direction.FORWARD, Gradient.UP), Scheme.RABBIT_SINGLE)) == (
        Scheme.RABBIT_SINGLE, Cue(Direction.FORWARD, Gradient.UP))
    cue = Cue(Direction.REAR_LEFT_TO_FRONT_RIGHT, Gradient.DOWN)
    assert decode(encode(cue, Scheme.MOTION_INTENSITY)) == (Scheme.MOTION_INTENSITY, cue)


def test_decoder_ignores_declared_labels():
    tl = encode(Cue(Direction.FORWARD, Gradient.UP), Scheme.RABBIT_DUAL)
    lying = Timeline(Scheme.MOTION_INTENSITY, Cue(Direction.LEFT_TO_RIGHT, Gradient.DOWN), tl.events)
    assert decode(lying) == (Scheme.RABBIT_DUAL, Cue(Direction.FORWARD, Gradient.UP))


def test_single_pulse_blocks_are_unknown_gradient():
    v = DEFAULT_SCALE[4]
    events = [VibrationEvent(6, 0, 450, v), VibrationEvent(7, 550, 450, v), VibrationEvent(8, 1100, 450, v)]
    with pytest.raises(DecodeError, match="unknown gradient"):
        decode(events)


def test_unknown_direction():
    v = DEFAULT_SCALE[4]
    events = [VibrationEvent(1, 0, 125, v), VibrationEvent(2, 300, 125, v), VibrationEvent(3, 600, 125, v)]
    with pytest.raises(DecodeError, match="unknown direction"):
        decode(events)


def test_empty_and_overlapping():
    with pytest.raises(DecodeError, match="empty"):
        decode([])
    with pytest.raises(DecodeError, match="overlapping"):
        decode([VibrationEvent(6, 0, 125, 0.5), VibrationEvent(6, 100, 125, 0.5)])


def test_off_ladder_intensity_rejected():
    tl = encode(Cue(Direction.FORWARD, Gradient.UP), Scheme.MOTION_INTENSITY)
    events = [e._replace(intensity=0.9) if i == 1 else e for i, e in enumerate(tl.events)]
    with pytest.raises(DecodeError, match="unknown gradient"):
        decode(events)


def test_ambiguous_scheme_is_an_error():
    # with the uniform level equal to the dual flat level the two rabbit schemes collide on flat cues
    timing = TimingConstants(uniform_level=3)
    tl = encode(Cue(Direction.FORWARD, Gradient.FLAT), Scheme.RABBIT_SINGLE, timing)
    with pytest.raises(DecodeError, match="ambiguous"):
        decode(tl, timing)


def _mirror(tl: Timeline) -> list[VibrationEvent]:
    return [e._replace(start=round(tl.total - e.end, 1)) for e in tl.events]


@pytest.mark.parametrize("scheme", list(Scheme))
@pytest.mark.parametrize("gradient", list(Gradient))
def test_time_reversal_flips_direction(scheme, gradient):
    tl = encode(Cue(Direction.LEFT_TO_RIGHT, gradient), scheme)
    got_scheme, got_cue = decode(_mirror(tl))
    flipped = {Gradient.UP: Gradient.DOWN, Gradient.DOWN: Gradient.UP, Gradient.FLAT: Gradient.FLAT}[gradient]
    assert got_scheme is scheme
    assert got_cue == Cue(Direction.RIGHT_TO_LEFT, flipped)


@given(
    st.sampled_from(ALL),
    st.lists(st.sampled_from([-1e-7, 1e-7]), min_size=12, max_size=12),
)
def test_robust_to_sub_tolerance_perturbation(case, signs):
    scheme, cue = case
    tl = encode(cue, scheme)
    events = [e._replace(intensity=e.intensity + s) for e, s in zip(tl.events, signs)]
    assert decode(events) == (scheme, cue)
