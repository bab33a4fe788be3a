import math

import pytest
from hypothesis import given, strategies as st

from ringq.errors import DomainError, UnsupportedExponentError
from ringq.geometry import (BallCondenser, SphericalRing, ball_volume, check_exponent,
                            unit_ball_volume, unit_sphere_area)


def sphere_area_by_recurrence(n):
    # A(2) = 2 pi, A(3) = 4 pi, A(n + 2) = 2 pi A(n) / n
    area = {2: 2 * math.pi, 3: 4 * math.pi}
    for k in range(4, n + 1):
        area[k] = 2 * math.pi * area[k - 2] / (k - 2)
    return area[n]


class TestConstants:
    @pytest.mark.parametrize("n, expected", [(2, 2 * math.pi), (3, 4 * math.pi),
                                             (5, 8 * math.pi**2 / 3)])
    def test_sphere_area_values(self, n, expected):
        assert unit_sphere_area(n) == pytest.approx(expected, rel=1e-14)

    def test_sphere_area_n5_numeric(self):
        assert unit_sphere_area(5) == pytest.approx(26.3189, abs=1e-4)

    @pytest.mark.parametrize("n", range(2, 17))
    def test_sphere_area_matches_recurrence(self, n):
        assert unit_sphere_area(n) == pytest.approx(sphere_area_by_recurrence(n), rel=1e-14)

    @pytest.mark.parametrize("n, expected", [(2, math.pi), (3, 4 * math.pi / 3)])
    def test_ball_volume_values(self, n, expected):
        assert unit_ball_volume(n) == pytest.approx(expected, rel=1e-15)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_area_is_n_times_volume(self, n):
        assert unit_sphere_area(n) == pytest.approx(n * unit_ball_volume(n), rel=1e-14)

    @pytest.mark.parametrize("bad", [1, 0, -3, 17, 2.5])
    def test_dimension_validation(self, bad):
        with pytest.raises(DomainError):
            unit_sphere_area(bad)
        with pytest.raises(DomainError):
            unit_ball_volume(bad)


class TestBallVolume:
    def test_examples(self):
        assert ball_volume(0, 3) == 0
        assert ball_volume(1, 3) == pytest.approx(4 * math.pi / 3)
        assert ball_volume(2, 2) == pytest.approx(4 * math.pi)

    def test_negative_radius(self):
        with pytest.raises(DomainError):
            ball_volume(-1, 3)

    @given(R=st.floats(1e-3, 1e3), n=st.integers(2, 10), lam=st.sampled_from([0.5, 2.0, 10.0]))
    def test_scaling(self, R, n, lam):
        assert ball_volume(lam * R, n) == pytest.approx(lam**n * ball_volume(R, n), rel=1e-13)


class TestTypes:
    def test_ring_invariants(self):
        for r1, r2 in [(0, 1), (2, 1), (1, 1), (-1, 2), (1, math.inf)]:
            with pytest.raises(DomainError):
                SphericalRing(r1, r2)
        ring = SphericalRing(1, 2, center=(0, 1, 2))
        assert ring.center == (0.0, 1.0, 2.0)
        assert ring.scaled(3) == SphericalRing(3, 6, (0, 1, 2))

    def test_condenser(self):
        cond = BallCondenser(2.0, 1.0)
        vA, vC = cond.volumes(3)
        assert vA == pytest.approx(8 * vC)
        assert cond.ring() == SphericalRing(1, 2)
        with pytest.raises(DomainError):
            BallCondenser(1.0, 1.0)

    def test_exponent(self):
        assert check_exponent(4, 2) == 4.0
        with pytest.raises(UnsupportedExponentError, match="requires p > n"):
            check_exponent(2, 2)
        with pytest.raises(UnsupportedExponentError):
            check_exponent(1.5, 3)
