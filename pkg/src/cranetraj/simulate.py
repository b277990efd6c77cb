"""Independent verification: integrate the swing ODEs under planned forcing.

The simulator never reuses the flatness predictions: it integrates the
rotating-frame pendulum equations (simplified linear or full nonlinear)
driven by the planned actuator trajectory, then reports transient and
residual swing. Classical fixed-step 4th-order Runge-Kutta keeps runs
reproducible and the convergence order testable; the forcing is evaluated
analytically on the half-step stage grid before integration, so there is no
interpolation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .flatness import jet, slew_from_flat, trolley_from_flat
from .model import SwingState, slew_swing_rhs, trolley_swing_rhs
from .planner import PlannedOperation

MAX_DT = 0.01


@dataclass
class SimResult:
    times: np.ndarray      # uniform grid, s
    states: np.ndarray     # (n, 4): alpha, alpha_dot, beta, beta_dot

    @property
    def alpha(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def alpha_dot(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def beta(self) -> np.ndarray:
        return self.states[:, 2]

    @property
    def beta_dot(self) -> np.ndarray:
        return self.states[:, 3]

    @property
    def max_abs_alpha(self) -> float:
        return float(np.max(np.abs(self.alpha)))

    @property
    def max_abs_beta(self) -> float:
        return float(np.max(np.abs(self.beta)))

    @property
    def residual(self) -> SwingState:
        a, ad, b, bd = self.states[-1]
        return SwingState(a, ad, b, bd)


def _stage_grid(duration: float, dt: float):
    """Uniform step count and the half-step grid carrying all RK4 stage
    times (2n + 1 points)."""
    if dt > MAX_DT:
        raise ValueError(f"dt must be <= {MAX_DT} s for the fixed-step integrator")
    n = max(1, int(round(duration / dt)))
    half = np.linspace(0.0, duration, 2 * n + 1)
    return n, half


def _rk4(stage_rhs, y0, duration: float, n: int) -> SimResult:
    """Integrate with rhs(stage_index, y); stage_index addresses the
    half-step grid (step i uses stages 2i, 2i+1, 2i+2)."""
    h = duration / n
    times = np.linspace(0.0, duration, n + 1)
    states = np.empty((n + 1, 4))
    y = np.array(y0, dtype=float)
    states[0] = y
    for i in range(n):
        s = 2 * i
        k1 = stage_rhs(s, y)
        k2 = stage_rhs(s + 1, y + 0.5 * h * k1)
        k3 = stage_rhs(s + 1, y + 0.5 * h * k2)
        k4 = stage_rhs(s + 2, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[i + 1] = y
    return SimResult(times, states)


def simulate_trolley_forcing(acc_fn, duration: float, D_H: float,
                             g: float = 9.8, dt: float = 1e-3,
                             full: bool = False,
                             initial: SwingState | None = None) -> SimResult:
    """Integrate the planar swing driven by a trolley acceleration acc_fn(t)
    (callable on a time array)."""
    n, half = _stage_grid(duration, dt)
    acc = np.asarray(acc_fn(half), dtype=float)

    def rhs(s, y):
        state = SwingState(y[0], y[1], 0.0, 0.0)
        ad, add = trolley_swing_rhs(state, acc[s], D_H, g, full)
        return np.array([ad, add, 0.0, 0.0])

    y0 = (initial or SwingState()).as_tuple()
    return _rk4(rhs, y0, duration, n)


def simulate_trolley(planned: PlannedOperation, D_H: float, g: float = 9.8,
                     dt: float = 1e-3, full: bool = False) -> SimResult:
    """Simulate the swing of a planned trolley operation from rest."""
    seg = planned.segments["flat"]

    def acc(ts):
        return trolley_from_flat(jet(seg, ts), D_H, g).d_T_ddot

    return simulate_trolley_forcing(acc, planned.duration, D_H, g, dt, full)


def simulate_slew_forcing(theta, theta_dot, theta_ddot, duration: float,
                          D_T: float, D_H: float, g: float = 9.8,
                          dt: float = 1e-3, full: bool = False) -> SimResult:
    """Integrate the coupled swing from rest, forced by jib motion arrays
    sampled on the half-step stage grid (2n + 1 points)."""
    n, half = _stage_grid(duration, dt)
    if len(theta) != half.size:
        raise ValueError("forcing arrays must live on the half-step grid")

    def rhs(s, y):
        state = SwingState(y[0], y[1], y[2], y[3])
        return np.array(slew_swing_rhs(state, theta[s], theta_dot[s],
                                       theta_ddot[s], D_T, D_H, g, full))

    return _rk4(rhs, (0.0, 0.0, 0.0, 0.0), duration, n)


def simulate_slew(planned: PlannedOperation, D_T: float, D_H: float,
                  g: float = 9.8, dt: float = 1e-3,
                  full: bool = False) -> SimResult:
    """Simulate the coupled swing of a planned slew operation from rest,
    forced by the planned (theta, theta_dot, theta_ddot)."""
    n, half = _stage_grid(planned.duration, dt)
    fs = slew_from_flat(jet(planned.segments["flat_x"], half),
                        jet(planned.segments["flat_y"], half),
                        D_T, D_H, g)
    return simulate_slew_forcing(fs.theta, fs.theta_dot, fs.theta_ddot,
                                 planned.duration, D_T, D_H, g, dt, full)


def convergence_order(simulate, dt_sequence, reference=None) -> float:
    """Observed integrator convergence order from a halving dt sequence.

    simulate(dt) must return a terminal state vector (or SimResult). With a
    reference solution, orders come from the error ratios directly; without
    one, Richardson-style self-differences of consecutive runs are used.
    Returns the mean observed order (expected ~4 for the classical scheme).
    """
    dts = list(dt_sequence)
    if len(dts) < 3:
        raise ValueError("need at least three dt values")
    for a, b in zip(dts, dts[1:]):
        if not math.isclose(a / b, 2.0, rel_tol=1e-9):
            raise ValueError("dt values must halve")

    def terminal(res):
        return res.states[-1] if isinstance(res, SimResult) else np.asarray(res, float)

    finals = [terminal(simulate(dt)) for dt in dts]
    if reference is not None:
        ref = np.asarray(reference, dtype=float)
        errors = [float(np.linalg.norm(f - ref)) for f in finals]
    else:
        errors = [float(np.linalg.norm(a - b)) for a, b in zip(finals, finals[1:])]
    orders = []
    for e1, e2 in zip(errors, errors[1:]):
        if e2 == 0.0:
            continue
        orders.append(math.log2(e1 / e2))
    if not orders:
        raise ValueError("errors vanished; cannot estimate an order")
    return float(np.mean(orders))
