import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ringq.errors import ConvergenceError, DomainError, UnsupportedExponentError
from ringq.geometry import SphericalRing
from ringq.modulus import (DiscreteDensity, admissibility_check, extremal_density, log_grid,
                           project_to_simplex, ring_modulus_exact, ring_modulus_grid,
                           ring_modulus_value)

# closed form evaluated at 30 digits with mpmath, independently of the package
FROZEN = [
    ((1, 16), 4, 2, 0.0121602117016757187158477457047),
    ((1, 2), 5, 3, 26.6804175922317200045138773491),
    ((0.5, 3), 6, 4, 0.64056313942266259023547910567),
    ((2, 7), 2.5, 2, 2.29149073558529924615030008653),
]

rings = st.tuples(st.floats(0.01, 100), st.floats(1.01, 1e4)).map(
    lambda t: SphericalRing(t[0], t[0] * t[1]))
dims_and_exponents = st.integers(2, 6).flatmap(
    lambda n: st.tuples(st.just(n), st.floats(n + 0.05, n + 6)))


class TestClosedForm:
    @pytest.mark.parametrize("radii, p, n, expected", FROZEN)
    def test_frozen_values(self, radii, p, n, expected):
        res = ring_modulus_exact(SphericalRing(*radii), p, n)
        assert res.value == pytest.approx(expected, rel=1e-14)
        assert res.method == "closed_form" and res.grid_points == 0

    def test_spec_example_magnitude(self):
        assert ring_modulus_exact(SphericalRing(1, 16), 4, 2).value == pytest.approx(1.216e-2,
                                                                                    rel=1e-3)

    def test_degenerate_ring_blows_up(self):
        vals = [ring_modulus_exact(SphericalRing(1, 1 + eps), 4, 2).value
                for eps in (1e-1, 1e-3, 1e-5)]
        assert vals[0] < vals[1] < vals[2]
        assert vals[2] > 1e12

    def test_errors(self):
        with pytest.raises(UnsupportedExponentError):
            ring_modulus_exact(SphericalRing(1, 2), 2, 2)
        with pytest.raises(UnsupportedExponentError):
            ring_modulus_exact(SphericalRing(1, 2), 2.5, 3)
        with pytest.raises(DomainError):
            ring_modulus_exact(SphericalRing(1e-7, 1e6), 4, 2)
        with pytest.raises(DomainError):
            ring_modulus_value(2, 1, 4, 2)

    def test_punctured_ball_is_finite(self):
        # inner radius 0 is the limit r1 -> 0 for p > n
        assert ring_modulus_value(0, 2, 4, 2) == pytest.approx(
            ring_modulus_value(1e-30, 2, 4, 2), rel=1e-12)

    @pytest.mark.parametrize("lam", [0.1, 3, 100])
    @given(ring=rings, np_=dims_and_exponents)
    def test_scaling(self, lam, ring, np_):
        n, p = np_
        base = ring_modulus_exact(ring, p, n).value
        scaled = ring_modulus_exact(ring.scaled(lam), p, n).value
        assert scaled == pytest.approx(lam ** (n - p) * base, rel=1e-12)

    @given(r1=st.floats(0.1, 10), a=st.floats(1.01, 50), b=st.floats(1.01, 50),
           np_=dims_and_exponents)
    def test_monotone_in_radii(self, r1, a, b, np_):
        n, p = np_
        lo, hi = sorted((a, b))
        if hi / lo < 1 + 1e-6:
            return
        m = lambda x, y: ring_modulus_exact(SphericalRing(x, y), p, n).value
        assert m(r1, r1 * hi) < m(r1, r1 * lo)          # grows outward: smaller
        r2 = r1 * hi * 1.5
        assert m(r1 * lo, r2) > m(r1, r2) or lo == 1    # inner radius up: larger


class TestSimplexProjection:
    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=40))
    def test_projection_is_feasible_and_optimal(self, ys):
        y = np.array(ys)
        x = project_to_simplex(y)
        assert np.all(x >= 0)
        assert x.sum() == pytest.approx(1.0, abs=1e-12)
        # KKT: y - x = tau on the support, and y - x <= tau off it
        tau = (y - x)[x > 0]
        assert np.ptp(tau) < 1e-9
        assert np.all((y - x)[x == 0] <= tau[0] + 1e-9)


class TestGridOracle:
    @pytest.mark.parametrize("radii, p, n, expected", FROZEN)
    def test_matches_closed_form(self, radii, p, n, expected):
        res = ring_modulus_grid(SphericalRing(*radii), p, n, 10_000)
        assert res.method == "grid_oracle" and res.grid_points == 10_000
        assert abs(res.value - expected) / expected < 1e-4

    def test_objective_non_increasing(self):
        res = ring_modulus_grid(SphericalRing(0.3, 20), 5, 3, 2000)
        hist = np.array(res.objective_history)
        assert len(hist) == res.iterations + 1
        assert np.all(np.diff(hist) <= 0)

    def test_uniform_start_is_upper_bound(self):
        ring = SphericalRing(1, 16)
        res = ring_modulus_grid(ring, 4, 2, 1000)
        assert res.objective_history[0] >= res.value
        r, w = log_grid(ring.r1, ring.r2, 1000)
        rho = np.full_like(r, 1 / (ring.r2 - ring.r1))
        uniform = 2 * math.pi * np.sum(rho**4 * r * w)
        assert uniform == pytest.approx(res.objective_history[0], rel=1e-12)

    def test_refinement_ladder(self):
        ring = SphericalRing(1, 16)
        exact = ring_modulus_exact(ring, 4, 2).value
        errs = [abs(ring_modulus_grid(ring, 4, 2, N).value - exact) / exact
                for N in (1000, 2000, 4000)]
        assert errs[0] > errs[1] > errs[2]

    def test_optimal_density_is_admissible_and_extremal(self):
        ring = SphericalRing(1, 16)
        res = ring_modulus_grid(ring, 4, 2, 4000)
        assert admissibility_check(res.density)
        ref = extremal_density(ring, 4, 2, radii=res.density.radii)
        np.testing.assert_allclose(res.density.values, ref.values, rtol=1e-4)

    def test_grid_floor_and_iteration_cap(self):
        ring = SphericalRing(1, 16)
        with pytest.raises(DomainError):
            ring_modulus_grid(ring, 4, 2, 15)
        with pytest.raises(ConvergenceError) as info:
            ring_modulus_grid(ring, 4, 2, 1000, max_iter=3)
        assert info.value.last_iterate.iterations == 3


class TestAdmissibility:
    ring = SphericalRing(1, 16)

    def test_uniform(self):
        r = np.linspace(1, 16, 50)
        assert admissibility_check(DiscreteDensity(r, np.full(50, 1 / 15)))

    def test_zero(self):
        r = np.linspace(1, 16, 50)
        assert not admissibility_check(DiscreteDensity(r, np.zeros(50)))

    def test_extremal_normalised(self):
        assert admissibility_check(extremal_density(self.ring, 4, 2))

    def test_negative_values_rejected(self):
        r = np.linspace(1, 16, 5)
        assert not admissibility_check(DiscreteDensity(r, np.array([1, 1, -1, 1, 1.0])))

    def test_empty(self):
        with pytest.raises(DomainError):
            admissibility_check(DiscreteDensity(np.array([]), np.array([])))

    def test_unsorted_grid(self):
        with pytest.raises(DomainError):
            DiscreteDensity(np.array([1.0, 3.0, 2.0]), np.ones(3))
