"""Polynomial trajectory segments: coefficients, boundaries, peaks."""

import math

import numpy as np
import pytest

from cranetraj.poly import (
    PolySegment, SegmentDomainError, flat_profile_11, from_bezier,
    hoist_profile, peak_abs_derivative,
)

# closed-form landmarks of the unit degree-7 profile
PEAK_VEL_7 = 140.0 / 64.0                     # first-derivative max, at tau=1/2
PEAK_ACC_7 = 420.0 / (25.0 * math.sqrt(5.0))  # second-derivative max, tau=(5-sqrt5)/10
EFFORT_CONST_7 = 280.0 / 11.0                 # integral of squared second derivative


class TestHoistProfile:
    def test_table_coefficients_for_unit_drop(self):
        seg = hoist_profile(5.0, 4.0, 8.0)
        np.testing.assert_allclose(
            seg.coeffs, [5, 0, 0, 0, -35, 84, -70, 20], atol=1e-12)

    def test_zero_displacement_is_constant(self):
        seg = hoist_profile(3.0, 3.0, 2.0)
        np.testing.assert_allclose(seg.coeffs[1:], 0.0)
        assert seg.eval(1.234) == 3.0

    def test_coefficient_sum_identity_hits_endpoint(self):
        # 35 - 84 + 70 - 20 = 1, so the final value is start + displacement
        rng = np.random.default_rng(3)
        for _ in range(20):
            a, b, T = rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.5, 20)
            seg = hoist_profile(a, b, T)
            assert seg.eval(T) == pytest.approx(b, abs=1e-12)
            assert seg.eval(0.0) == pytest.approx(a, abs=1e-12)

    def test_boundary_derivatives_vanish(self):
        seg = hoist_profile(5.0, 4.0, 8.0)
        for order in (1, 2, 3):
            assert abs(seg.eval(0.0, order)) < 1e-9
            assert abs(seg.eval(8.0, order)) < 1e-9

    def test_rejects_nonpositive_duration(self):
        with pytest.raises(SegmentDomainError):
            hoist_profile(0.0, 1.0, 0.0)


class TestFlatProfile:
    def test_table_coefficients_for_half_metre(self):
        seg = flat_profile_11(2.0, 2.5, 6.0)
        np.testing.assert_allclose(
            seg.coeffs[6:], [231.0, -990.0, 1732.5, -1540.0, 693.0, -126.0],
            atol=1e-12)

    def test_coefficient_sum_identity(self):
        assert 462 - 1980 + 3465 - 3080 + 1386 - 252 == 1
        seg = flat_profile_11(-1.5, 4.25, 3.0)
        assert seg.eval(3.0) == pytest.approx(4.25, abs=1e-12)

    def test_midpoint_symmetry(self):
        seg = flat_profile_11(0.0, 1.0, 1.0)
        assert seg.eval(0.5) == pytest.approx(0.5)

    def test_boundary_derivatives_vanish_to_order_five(self):
        seg = flat_profile_11(1.0, 3.0, 4.0)
        for order in range(1, 6):
            assert abs(seg.eval(0.0, order)) < 1e-9
            assert abs(seg.eval(4.0, order)) < 1e-9

    def test_slew_boundary_products(self):
        # endpoints equal the circle coordinates fed in
        D_T, th_i, th_f = 2.5, math.radians(50), math.radians(80)
        seg = flat_profile_11(D_T * math.cos(th_i), D_T * math.cos(th_f), 5.0)
        assert seg.eval(0.0) == pytest.approx(D_T * math.cos(th_i))
        assert seg.eval(5.0) == pytest.approx(D_T * math.cos(th_f))


class TestEval:
    def test_hoist_boundary_values(self):
        seg = hoist_profile(5.0, 4.0, 8.0)
        assert seg.eval(0.0, 0) == 5.0
        for k in (1, 2, 3):
            assert seg.eval(0.0, k) == pytest.approx(0.0, abs=1e-12)

    def test_peak_velocity_value(self):
        seg = hoist_profile(0.0, 1.0, 1.0)
        assert seg.eval(0.5, 1) == pytest.approx(PEAK_VEL_7)

    def test_scaling_law(self):
        # order-k derivative at tau*T scales as T^-k
        rng = np.random.default_rng(5)
        unit = flat_profile_11(0.0, 1.0, 1.0)
        for T in (0.5, 3.0, 12.0):
            seg = flat_profile_11(0.0, 1.0, T)
            for _ in range(10):
                tau = rng.uniform(0, 1)
                for k in range(6):
                    assert seg.eval(tau * T, k) == pytest.approx(
                        unit.eval(tau, k) / T ** k, rel=1e-12, abs=1e-12)

    def test_rejects_out_of_domain_time(self):
        seg = hoist_profile(0.0, 1.0, 1.0)
        with pytest.raises(SegmentDomainError):
            seg.eval(1.5)
        with pytest.raises(SegmentDomainError):
            seg.eval(np.array([0.2, -0.3]))

    def test_rejects_order_above_five(self):
        seg = hoist_profile(0.0, 1.0, 1.0)
        with pytest.raises(SegmentDomainError):
            seg.eval(0.5, 6)

    def test_scalar_and_array_paths_agree(self):
        seg = flat_profile_11(1.0, -2.0, 3.0)
        ts = np.linspace(0, 3, 17)
        for k in range(6):
            arr = seg.eval(ts, k)
            scal = [seg.eval(float(t), k) for t in ts]
            np.testing.assert_allclose(arr, scal, rtol=1e-15, atol=1e-300)


class TestPeaks:
    def test_first_derivative_peak(self):
        seg = hoist_profile(0.0, 1.0, 1.0)
        assert peak_abs_derivative(seg, 1) == pytest.approx(PEAK_VEL_7, rel=1e-9)

    def test_second_derivative_peak(self):
        seg = hoist_profile(0.0, 1.0, 1.0)
        assert peak_abs_derivative(seg, 2) == pytest.approx(PEAK_ACC_7, rel=1e-6)

    def test_constant_segment_has_zero_peaks(self):
        seg = hoist_profile(2.0, 2.0, 1.0)
        for order in (1, 2, 3, 4):
            assert peak_abs_derivative(seg, order) == 0.0

    def test_peak_matches_dense_grid_oracle(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            seg = flat_profile_11(rng.uniform(-2, 2), rng.uniform(-2, 2),
                                  rng.uniform(0.5, 10))
            order = int(rng.integers(1, 5))
            dense = np.max(np.abs(seg.sample(1_000_001, order)))
            fast = peak_abs_derivative(seg, order)
            assert fast == pytest.approx(dense, rel=1e-7)


class TestBezierConstructor:
    def test_clamped_control_points_reproduce_hoist_coefficients(self):
        # four copies of the start and four of the end solve the degree-7
        # rest-to-rest boundary conditions
        d_i, d_f = 5.0, 4.0
        seg = from_bezier([d_i] * 4 + [d_f] * 4, 8.0)
        np.testing.assert_allclose(seg.coeffs, hoist_profile(d_i, d_f, 8.0).coeffs,
                                   atol=1e-9)

    def test_clamped_degree_11_matches_flat_profile(self):
        a, b = 2.0, 2.5
        seg = from_bezier([a] * 6 + [b] * 6, 5.0)
        np.testing.assert_allclose(seg.coeffs, flat_profile_11(a, b, 5.0).coeffs,
                                   atol=1e-8)

    def test_linear_bezier(self):
        seg = from_bezier([0.0, 1.0], 2.0)
        np.testing.assert_allclose(seg.coeffs, [0.0, 1.0], atol=1e-14)


class TestEffortIdentity:
    def test_squared_acceleration_integral_closed_form(self):
        # integral of (second derivative)^2 over the segment equals
        # (280/11) * displacement^2 / T^3; oracle is Simpson quadrature on
        # 1e5 panels, required agreement 1e-9 relative
        rng = np.random.default_rng(21)
        for _ in range(5):
            delta = rng.uniform(-3, 3)
            T = rng.uniform(1.0, 15.0)
            seg = hoist_profile(0.0, delta, T)
            n = 100_000
            ts = np.linspace(0.0, T, n + 1)
            y = seg.eval(ts, 2) ** 2
            h = T / n
            simpson = h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())
            closed = EFFORT_CONST_7 * delta ** 2 / T ** 3
            assert simpson == pytest.approx(closed, rel=1e-9)

    def test_jerk_continuity_finite_everywhere(self):
        seg = hoist_profile(0.0, 1.0, 2.0)
        jerk = seg.sample(2001, 3)
        assert np.all(np.isfinite(jerk))
        assert abs(jerk[0]) < 1e-9 and abs(jerk[-1]) < 1e-9
