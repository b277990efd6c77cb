"""Crane parameter types and swing dynamics right-hand sides."""

import json
import math

import numpy as np
import pytest

from cranetraj.model import (
    CraneLimits, OperationKind, OperationSpec, ParameterError, SwingDomainError,
    SwingState, slew_swing_rhs, trolley_swing_rhs,
)

G = 9.8


class TestCraneLimits:
    def test_defaults_match_data_sheet(self):
        lm = CraneLimits()
        assert lm.hoist_vel_min == 0.1
        assert lm.hoist_vel_max == 0.3
        assert lm.trolley_vel_max == 0.25
        assert lm.slew_vel_max == pytest.approx(math.radians(10))
        assert lm.alpha_max == pytest.approx(math.radians(2.5))
        assert lm.g == 9.8

    @pytest.mark.parametrize("field,value", [
        ("hoist_vel_max", -0.1), ("trolley_acc_max", 0.0), ("g", -9.8),
    ])
    def test_rejects_nonpositive(self, field, value):
        with pytest.raises(ParameterError):
            CraneLimits(**{field: value})

    def test_rejects_inverted_velocity_band(self):
        with pytest.raises(ParameterError):
            CraneLimits(hoist_vel_min=0.4)

    def test_rejects_swing_limit_at_right_angle(self):
        with pytest.raises(ParameterError):
            CraneLimits(alpha_max=math.pi / 2)

    def test_json_roundtrip_converts_degrees(self, tmp_path):
        doc = {
            "hoist_vel_min_mps": 0.1, "hoist_vel_max_mps": 0.3,
            "hoist_acc_max_mps2": 0.2, "trolley_vel_min_mps": 0.05,
            "trolley_vel_max_mps": 0.25, "trolley_acc_max_mps2": 0.2,
            "slew_vel_min_degps": 3, "slew_vel_max_degps": 10,
            "slew_acc_max_degps2": 10, "alpha_max_deg": 2.5,
            "beta_max_deg": 2.5, "g_mps2": 9.8,
        }
        p = tmp_path / "limits.json"
        p.write_text(json.dumps(doc))
        lm = CraneLimits.from_json(p)
        assert lm.slew_vel_max == pytest.approx(math.radians(10))
        assert lm.beta_max == pytest.approx(math.radians(2.5))
        assert lm.to_dict() == pytest.approx(doc)

    def test_unknown_key_rejected(self):
        with pytest.raises(ParameterError):
            CraneLimits.from_dict({"hoist_speed": 1.0})


class TestOperationSpec:
    def test_trolley_requires_hoist_length(self):
        with pytest.raises(ParameterError):
            OperationSpec(OperationKind.TROLLEY, 2.0, 2.5)

    def test_slew_requires_both_fixed_parameters(self):
        with pytest.raises(ParameterError):
            OperationSpec(OperationKind.SLEW, 0.0, 1.0, fixed_hoist=5.0)

    def test_displacement(self):
        op = OperationSpec(OperationKind.HOIST, 5.0, 4.0)
        assert op.displacement == -1.0


class TestTrolleySwing:
    def test_equilibrium(self):
        ad, add = trolley_swing_rhs(SwingState(), 0.0, 5.0, G)
        assert (ad, add) == (0.0, 0.0)

    def test_restoring_acceleration(self):
        # alpha = 0.01 rad hanging payload, no forcing
        _, add = trolley_swing_rhs(SwingState(alpha=0.01), 0.0, 5.0, G)
        assert add == pytest.approx(-0.0196)

    def test_step_input_matches_linear_ode_solution(self):
        # analytic response to constant acceleration a0 from rest:
        # alpha(t) = -(a0/g)(1 - cos(sqrt(g/D_H) t)); RK4 oracle at dt=1e-4
        D_H, a0 = 5.0, 0.1
        omega = math.sqrt(G / D_H)
        dt = 1e-4
        state = SwingState()
        t = 0.0
        for _ in range(30000):
            y = np.array([state.alpha, state.alpha_dot])

            def f(y_):
                s = SwingState(alpha=y_[0], alpha_dot=y_[1])
                return np.array(trolley_swing_rhs(s, a0, D_H, G))

            k1 = f(y)
            k2 = f(y + dt / 2 * k1)
            k3 = f(y + dt / 2 * k2)
            k4 = f(y + dt * k3)
            y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            state = SwingState(alpha=y[0], alpha_dot=y[1])
            t += dt
        expected = -(a0 / G) * (1.0 - math.cos(omega * t))
        assert state.alpha == pytest.approx(expected, abs=1e-9)

    def test_full_equals_simplified_to_third_order(self):
        # Taylor consistency: difference O(alpha^3) as alpha -> 0
        D_H, acc = 5.0, 0.05
        errs = []
        for alpha in (1e-3, 1e-2):
            _, simp = trolley_swing_rhs(SwingState(alpha=alpha), acc, D_H, G)
            _, full = trolley_swing_rhs(SwingState(alpha=alpha), acc, D_H, G, full=True)
            errs.append(abs(full - simp))
        # cubic scaling: two decades in alpha ~ 1e3 in error (quadratic term
        # from cos enters at alpha^2 * acc, tiny here)
        assert errs[0] < 1e-8
        assert errs[1] < 1e-4 * abs(G * 1e-2 / D_H)

    def test_full_rejects_right_angle(self):
        with pytest.raises(SwingDomainError):
            trolley_swing_rhs(SwingState(alpha=math.pi / 2), 0.0, 5.0, G, full=True)

    def test_nonpositive_cable_length(self):
        with pytest.raises(ParameterError):
            trolley_swing_rhs(SwingState(), 0.0, 0.0, G)

    def test_energy_conserved_unforced(self):
        # D_H alpha_dot^2/2 + g alpha^2/2 is invariant under the simplified
        # dynamics; verified to integrator tolerance
        D_H = 5.0
        dt = 1e-4
        y = np.array([0.03, 0.0])

        def f(y_):
            s = SwingState(alpha=y_[0], alpha_dot=y_[1])
            return np.array(trolley_swing_rhs(s, 0.0, D_H, G))

        def energy(y_):
            return D_H * y_[1] ** 2 / 2 + G * y_[0] ** 2 / 2

        e0 = energy(y)
        for _ in range(50000):
            k1 = f(y)
            k2 = f(y + dt / 2 * k1)
            k3 = f(y + dt / 2 * k2)
            k4 = f(y + dt * k3)
            y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        assert energy(y) == pytest.approx(e0, rel=1e-10)


def _full_slew_residuals(state, theta_dot, theta_ddot, D_T, D_H, g=G):
    """Residuals of the original implicit full slew equations given the
    explicit (alpha_ddot, beta_ddot) returned by the library."""
    a, ad, b, bd = state.as_tuple()
    _, add, _, bdd = slew_swing_rhs(state, 0.0, theta_dot, theta_ddot,
                                    D_T, D_H, g, full=True)
    sa, ca, sb, cb = math.sin(a), math.cos(a), math.sin(b), math.cos(b)
    td, tdd = theta_dot, theta_ddot
    r1 = (D_H * add * cb - D_H * tdd * sb * ca - 2 * D_H * ad * bd * sb
          - 2 * D_H * bd * td * cb * ca - D_H * td ** 2 * cb * sa * ca
          - D_T * td ** 2 * ca + g * sa)
    r2 = (D_H * bdd + (D_T * cb + D_H * sa) * tdd + D_H * ad ** 2 * sb * cb
          - D_H * td ** 2 * sb * cb * ca ** 2 + 2 * D_H * td * ad * cb ** 2 * ca
          + D_T * td ** 2 * sa * sb + g * sb * ca)
    return r1, r2


class TestSlewSwing:
    def test_equilibrium(self):
        out = slew_swing_rhs(SwingState(), 0.0, 0.0, 0.0, 2.5, 5.0, G)
        assert out == (0.0, 0.0, 0.0, 0.0)

    def test_centrifugal_kick_at_rest(self):
        # zero swing, constant rotation rate: radial acceleration only
        D_T, D_H, w = 2.5, 5.0, 0.1
        ad, add, bd, bdd = slew_swing_rhs(SwingState(), 0.0, w, 0.0, D_T, D_H, G)
        assert add == pytest.approx(D_T * w ** 2 / D_H)
        assert (ad, bd, bdd) == (0.0, 0.0, 0.0)

    def test_full_matches_simplified_for_small_state(self):
        rng = np.random.default_rng(7)
        scale = math.radians(0.5)
        for _ in range(50):
            st = SwingState(*(rng.uniform(-scale, scale, 4)))
            td, tdd = rng.uniform(-0.05, 0.05, 2)
            simp = slew_swing_rhs(st, 0.3, td, tdd, 2.5, 5.0, G)
            full = slew_swing_rhs(st, 0.3, td, tdd, 2.5, 5.0, G, full=True)
            mag = max(1.0, max(abs(v) for v in simp))
            for s, f in zip(simp, full):
                assert abs(s - f) <= 1e-4 * mag

    def test_explicit_rearrangement_satisfies_original_equations(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            st = SwingState(*(rng.uniform(-0.3, 0.3, 4)))
            td, tdd = rng.uniform(-0.3, 0.3, 2)
            D_T, D_H = rng.uniform(1.0, 5.0, 2)
            r1, r2 = _full_slew_residuals(st, td, tdd, D_T, D_H)
            assert abs(r1) < 1e-10
            assert abs(r2) < 1e-10

    def test_full_rejects_domain_violation(self):
        with pytest.raises(SwingDomainError):
            slew_swing_rhs(SwingState(beta=math.pi / 2), 0.0, 0.0, 0.0,
                           2.5, 5.0, G, full=True)
