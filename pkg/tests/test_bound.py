import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigenbound.bound import (
    BoundInput,
    constant_C,
    crossover_diameter,
    matched_radii,
    neumann_upper_bound,
    validate_assumptions,
    wang_constant,
)
from eigenbound.errors import DomainError, InfeasibleVolumeError
from eigenbound.radial_eig import mu1_ball
from eigenbound.spaceform import SpaceFormBall, antipodal_distance, ball_volume, total_volume

import oracles

# oracles.fd_constant_C(-1, -4, 3.41228, 2.0): trapezoid/FD transcription of C
FD_C = 6.074946396187765
FD_R = 1.00000050578418
FD_R_PRIME = 0.9108948239060566
# for n = 2, K = -4, k = -1 the diameter ratio is cosh(d), so C(d) = Wang(d) at
# d* = arccosh(FD_C / cosh(2))
CROSSOVER = 1.0586767098234917


def test_matched_radii_sphere_vs_plane():
    R, Rp = matched_radii(2, 1.0, 0.0, 2 * math.pi * (1 - math.cos(1)))
    assert R == pytest.approx(1.0, rel=1e-13)
    assert Rp == pytest.approx(math.sqrt(2 * (1 - math.cos(1))), rel=1e-13)


def test_equal_curvature_constant_is_one():
    b = constant_C(BoundInput(2, -1.0, -1.0, 3.41228, 2.0))
    assert b.C == 1.0
    assert b.wang == 1.0
    assert b.bound_value == b.mu1_ball


def test_against_fd_oracle():
    b = constant_C(BoundInput(2, -1.0, -4.0, 3.41228, 2.0))
    assert b.R == pytest.approx(FD_R, rel=1e-12)
    assert b.R_prime == pytest.approx(FD_R_PRIME, rel=1e-12)
    assert b.C == pytest.approx(FD_C, rel=1e-9)
    assert b.bound_value == pytest.approx(b.C * b.mu1_ball, rel=1e-15)
    assert b.wang == pytest.approx(b.ratio_d ** 2, rel=1e-15)


def test_fd_oracle_regenerates():
    C, _, R, Rp = oracles.fd_constant_C(-1.0, -4.0, 3.41228, 2.0, N=1000)
    assert C == pytest.approx(FD_C, rel=1e-6)
    assert Rp == pytest.approx(FD_R_PRIME, rel=1e-8)


def test_wang_constant_values():
    assert wang_constant(2, -1.0, -4.0, 2.0) == pytest.approx((math.sinh(4) / 2 / math.sinh(2)) ** 2, rel=1e-14)
    assert wang_constant(3, 0.0, -1.0, 1.0) == pytest.approx(math.sinh(1) ** 4, rel=1e-14)
    with pytest.raises(DomainError):
        wang_constant(2, 1.0, 0.0, 1.6)


def test_crossover():
    d = crossover_diameter(2, -1.0, -4.0, 3.41228, 20.0)
    assert d == pytest.approx(CROSSOVER, abs=1e-8)
    at = lambda x: constant_C(BoundInput(2, -1.0, -4.0, 3.41228, x))
    assert at(0.9 * d).C > at(0.9 * d).wang
    assert at(2 * d).C < at(2 * d).wang


def test_crossover_requires_negative_pinching():
    with pytest.raises(DomainError):
        crossover_diameter(2, 0.5, -1.0, 1.0, 2.0)
    with pytest.raises(DomainError):
        crossover_diameter(2, -1.0, -1.0, 1.0, 2.0)


def test_crossover_none_when_range_too_short():
    assert crossover_diameter(2, -1.0, -4.0, 3.41228, 0.5) is None


def test_invalid_inputs():
    with pytest.raises(DomainError):
        BoundInput(2, -4.0, -1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        BoundInput(1, 0.0, 0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        BoundInput(2, 0.0, 0.0, -1.0, 1.0)
    with pytest.raises(InfeasibleVolumeError):
        constant_C(BoundInput(2, 1.0, 0.0, 13.0, 1.0))
    with pytest.raises(DomainError):
        constant_C(BoundInput(2, 1.0, 0.0, 1.0, 3.5))


def test_assumptions_for_positive_k():
    ok = validate_assumptions(2, 1.0, 0.0, 1.0, 1.0)
    assert ok.requires_size_conditions and ok.ok
    too_wide = validate_assumptions(2, 1.0, 0.0, 1.0, 1.6)
    assert too_wide.cond_A_ok is False and not too_wide.ok
    too_big = validate_assumptions(2, 1.0, 0.0, 0.6 * total_volume(1.0, 2), 1.0)
    assert too_big.cond_B_ok is False
    inj = validate_assumptions(2, 1.0, 0.0, 1.0, 1.0, injectivity_radius=0.8)
    assert inj.cond_A_ok is False
    neg = validate_assumptions(2, -1.0, -2.0, 5.0, 10.0)
    assert neg.ok and neg.cond_A_ok is None


def test_bound_value_of_ball_equals_its_eigenvalue():
    # a geodesic ball with k = K: the bound is attained
    V = ball_volume(SpaceFormBall(-1.0, 3, 0.7))
    assert neumann_upper_bound(BoundInput(3, -1.0, -1.0, V, 1.4)) == pytest.approx(mu1_ball(-1.0, 3, 0.7), rel=1e-10)


@st.composite
def equal_curvature_inputs(draw):
    n = draw(st.integers(2, 4))
    k = draw(st.floats(-4.0, 1.0))
    R = draw(st.floats(0.1, 0.95)) * min(antipodal_distance(k) / 2, 2.5)
    V = ball_volume(SpaceFormBall(k, n, R))
    d_max = min(0.5 * antipodal_distance(k), 6.0)
    d = draw(st.floats(0.05, 0.99)) * d_max
    return BoundInput(n, k, k, V, d)


@settings(max_examples=50, deadline=None)
@given(equal_curvature_inputs())
def test_equal_curvatures_give_one(inp):
    assert constant_C(inp).C == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=10, deadline=None)
@given(k=st.floats(-2.0, -0.1), gap=st.floats(0.05, 3.0), n=st.integers(2, 3))
def test_C_nondecreasing_in_diameter(k, gap, n):
    K = k - gap
    base = constant_C(BoundInput(n, k, K, 1.0, 0.1))
    ds = np.linspace(0.1, 4.0, 25)
    Cs = [constant_C(BoundInput(n, k, K, 1.0, d)).C for d in ds]
    assert Cs[0] == base.C
    assert np.all(np.diff(Cs) >= 0)


@settings(max_examples=20, deadline=None)
@given(k=st.floats(-2.0, 0.5), gap=st.floats(0.05, 3.0), frac=st.floats(0.1, 0.9))
def test_C_at_least_one(k, gap, frac):
    K = k - gap
    d = frac * min(0.5 * antipodal_distance(k), 3.0)
    V = ball_volume(SpaceFormBall(k, 2, d / 2))
    b = constant_C(BoundInput(2, k, K, V, d))
    # every ratio in C is at least one when K < k
    assert b.ratio_R >= 1 and b.ratio_d >= 1
    assert b.C >= 1
