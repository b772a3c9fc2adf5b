import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigenbound.errors import DomainError, InfeasibleVolumeError
from eigenbound.spaceform import (
    SpaceFormBall,
    antipodal_distance,
    ball_volume,
    cos_m,
    radius_from_volume,
    sin_m,
    sin_ratio,
    total_volume,
    unit_sphere_area,
)

from oracles import cosh_series, sinh_series


def test_sin_m_closed_forms():
    assert sin_m(1.0, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert sin_m(0.0, 1.3) == 1.3
    assert sin_m(-1.0, 1.0) == pytest.approx(sinh_series(1.0), rel=1e-15)
    assert sin_m(-4.0, 0.7) == pytest.approx(sinh_series(1.4) / 2, rel=1e-15)
    assert cos_m(-1.0, 2.0) == pytest.approx(cosh_series(2.0), rel=1e-15)
    assert cos_m(4.0, 0.25) == pytest.approx(math.cos(0.5), rel=1e-15)


def test_series_branch_is_continuous():
    # just below and above the switch |m| r^2 = 1e-6
    for m in (1.0, -1.0):
        for r in (0.999e-3, 1.001e-3):
            exact = math.sin(r) if m > 0 else math.sinh(r)
            assert sin_m(m, r) == pytest.approx(exact, rel=1e-15)


def test_array_and_scalar_paths_agree():
    r = np.linspace(0, 2.5, 41)
    for m in (-2.0, 0.0, 0.3):
        arr = sin_m(m, r)
        assert np.allclose(arr, [sin_m(m, float(x)) for x in r], rtol=1e-15, atol=0)


def test_domain_errors():
    with pytest.raises(DomainError):
        sin_m(1.0, -0.1)
    with pytest.raises(DomainError):
        sin_m(1.0, 4.0)
    with pytest.raises(DomainError):
        SpaceFormBall(1.0, 2, math.pi)
    with pytest.raises(DomainError):
        SpaceFormBall(0.0, 1, 1.0)
    with pytest.raises(DomainError):
        sin_ratio(-1.0, -4.0, 1.0)


def test_ball_volume_closed_forms():
    assert ball_volume(SpaceFormBall(0.0, 2, 1.0)) == pytest.approx(math.pi, rel=1e-14)
    assert ball_volume(SpaceFormBall(0.0, 3, 2.0)) == pytest.approx(4 / 3 * math.pi * 8, rel=1e-14)
    assert ball_volume(SpaceFormBall(1.0, 2, 1.0)) == pytest.approx(2 * math.pi * (1 - math.cos(1)), rel=1e-14)
    assert ball_volume(SpaceFormBall(-1.0, 2, 1.0)) == pytest.approx(2 * math.pi * (math.cosh(1) - 1), rel=1e-14)
    assert total_volume(1.0, 2) == pytest.approx(4 * math.pi, rel=1e-14)
    assert total_volume(1.0, 3) == pytest.approx(2 * math.pi ** 2, rel=1e-13)
    assert math.isinf(total_volume(0.0, 2))
    assert unit_sphere_area(3) == pytest.approx(4 * math.pi)


def test_radius_from_volume_examples():
    assert radius_from_volume(-1.0, 2, 2 * math.pi * (math.cosh(1) - 1)) == pytest.approx(1.0, rel=1e-13)
    assert radius_from_volume(1.0, 2, 2 * math.pi) == pytest.approx(math.pi / 2, rel=1e-13)
    with pytest.raises(InfeasibleVolumeError):
        radius_from_volume(1.0, 2, 4 * math.pi)
    with pytest.raises(DomainError):
        radius_from_volume(0.0, 2, -1.0)


@settings(max_examples=60, deadline=None)
@given(
    m=st.floats(-4.0, 1.0),
    n=st.integers(2, 5),
    frac=st.floats(0.02, 0.95),
)
def test_volume_roundtrip(m, n, frac):
    R = frac * min(antipodal_distance(m), 3.0)
    V = ball_volume(SpaceFormBall(m, n, R))
    assert radius_from_volume(m, n, V) == pytest.approx(R, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(m=st.floats(-3.0, 2.0), n=st.integers(2, 4), r1=st.floats(0.05, 1.0), r2=st.floats(0.05, 1.0))
def test_volume_monotone_in_radius(m, n, r1, r2):
    lo, hi = sorted((r1, r2))
    if hi - lo < 1e-6:
        return
    assert ball_volume(SpaceFormBall(m, n, lo)) < ball_volume(SpaceFormBall(m, n, hi))


@settings(max_examples=80, deadline=None)
@given(K=st.floats(-5.0, 1.0), gap=st.floats(1e-4, 3.0))
def test_sin_ratio_nondecreasing(K, gap):
    k = K + gap
    top = 0.999 * antipodal_distance(k) if k > 0 else 4.0
    r = np.linspace(0, top, 1000)
    ratio = sin_ratio(K, k, r)
    assert ratio[0] == 1.0
    assert np.all(np.diff(ratio) >= -1e-12 * ratio[1:])


def test_sin_ratio_equal_curvatures_is_one():
    assert sin_ratio(-2.0, -2.0, 3.0) == 1.0
    assert np.all(sin_ratio(0.5, 0.5, np.linspace(0, 1, 5)) == 1.0)
