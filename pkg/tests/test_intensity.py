import pytest
from hypothesis import given, strategies as st

from vibrocue.glove import Gradient
from vibrocue.intensity import Scheme, build_scale, gradient_levels


def test_paper_ladder():
    s = build_scale(0.22, 0.3, 7)
    assert s.level(1) == 0.22
    assert s.level(2) == pytest.approx(0.286, abs=1e-12)
    # 0.22 * 1.3**6 = 1.0619... so the top level is clamped
    assert 0.22 * 1.3**6 > 1.0
    assert s.level(7) == 1.0
    assert len(s) == 7
    for k in range(1, 6):
        assert s.level(k + 1) / s.level(k) == pytest.approx(1.3, abs=1e-12)


@pytest.mark.parametrize("base,jnd,n", [(0.0, 0.3, 7), (1.1, 0.3, 7), (0.22, 0.0, 7), (0.22, 0.3, 0)])
def test_build_scale_rejects(base, jnd, n):
    with pytest.raises(ValueError):
        build_scale(base, jnd, n)


def test_level_index_bounds():
    s = build_scale()
    with pytest.raises(IndexError):
        s.level(0)
    with pytest.raises(IndexError):
        s.level(8)


@given(st.floats(0.01, 1.0), st.floats(0.01, 2.0), st.integers(1, 20))
def test_ladder_monotone_with_clamp(base, jnd, n):
    s = build_scale(base, jnd, n)
    assert s.level(1) == base
    for k in range(1, n):
        lo, hi = s.level(k), s.level(k + 1)
        assert hi >= lo
        if hi == lo:
            assert hi == 1.0
        elif hi < 1.0:
            assert hi / lo == pytest.approx(1 + jnd, rel=1e-12)
    assert all(0 < v <= 1.0 for v in s.levels)


def test_gradient_levels():
    assert gradient_levels(Scheme.RABBIT_DUAL, Gradient.UP) == (1, 3, 6)
    assert gradient_levels(Scheme.RABBIT_DUAL, Gradient.DOWN) == (6, 3, 1)
    assert gradient_levels(Scheme.RABBIT_DUAL, Gradient.FLAT) == (3, 3, 3)
    assert gradient_levels(Scheme.MOTION_INTENSITY, Gradient.UP) == (1, 4, 6)
    assert gradient_levels(Scheme.MOTION_INTENSITY, Gradient.DOWN) == (6, 4, 1)
    assert gradient_levels(Scheme.MOTION_INTENSITY, Gradient.FLAT) == (4, 4, 4)


@pytest.mark.parametrize("scheme", [Scheme.RABBIT_DUAL, Scheme.MOTION_INTENSITY])
def test_gradient_symmetry(scheme):
    up = gradient_levels(scheme, Gradient.UP)
    assert gradient_levels(scheme, Gradient.DOWN) == up[::-1]
    assert up[0] < up[1] < up[2]
    assert len(set(gradient_levels(scheme, Gradient.FLAT))) == 1


def test_rabbit_single_has_no_gradient_levels():
    with pytest.raises(ValueError, match="uniform intensity"):
        gradient_levels(Scheme.RABBIT_SINGLE, Gradient.UP)
