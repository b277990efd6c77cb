"""Bi-objective duration problems for the three crane operations.

Each operation reduces to a single decision variable, the duration T: the
trajectory shape is fixed by the rest-to-rest boundary conditions, so the
objectives are f1 = T and f2 = normalized actuator effort
(integral of squared acceleration over the squared acceleration limit), and
every path constraint becomes a max-over-time inequality evaluated on the
closed-form profiles.

Feasibility uses the exact (un-relaxed) forms of the constraints. The
triangle-inequality relaxations that decouple the flat-output derivatives
look attractive on paper but their bounds are negative for realistic limit
sets (g*alpha_max exceeds the trolley acceleration limit, and
D_H*alpha_max < D_T for any crane-scale geometry), which would mark every
duration infeasible; they are therefore computed and attached to the report
as diagnostics instead of driving feasibility. See ConstraintReport.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .flatness import jet, slew_flat_boundaries, slew_from_flat, trolley_from_flat
from .model import CraneLimits, OperationKind, OperationSpec, ParameterError
from .poly import flat_profile_11, hoist_profile

DEFAULT_T_LO = 1e-3


class ZeroDisplacementError(ValueError):
    """Decision bounds are undefined for a zero-displacement operation."""


@dataclass(frozen=True)
class Objectives:
    time: float      # s
    effort: float    # dimensionless

    def __post_init__(self):
        if self.time <= 0.0:
            raise ValueError("operating time must be positive")
        if self.effort < 0.0:
            raise ValueError("effort must be non-negative")


@dataclass(frozen=True)
class ConstraintEntry:
    name: str
    limit: float
    attained: float
    operative: bool = True

    @property
    def violation(self) -> float:
        return max(0.0, self.attained - self.limit)


@dataclass(frozen=True)
class ConstraintReport:
    """Per-constraint maxima against their limits.

    Only operative entries count toward total_violation; diagnostic entries
    (operative=False) record the relaxed textbook bounds and the direct slew
    acceleration peak for inspection.
    """

    entries: tuple = ()

    @property
    def total_violation(self) -> float:
        return sum(e.violation for e in self.entries if e.operative)

    @property
    def feasible(self) -> bool:
        return self.total_violation == 0.0

    def entry(self, name: str) -> ConstraintEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    @property
    def operative_names(self) -> tuple:
        return tuple(e.name for e in self.entries if e.operative)


def decision_bounds(op: OperationSpec, limits: CraneLimits,
                    multiplier: float = 1.0) -> tuple[float, float]:
    """Duration search interval [t_lo, t_hi].

    t_hi assumes the operation runs at the actuator's minimum continuous
    velocity, scaled by the multiplier; t_lo is a small positive epsilon.
    """
    delta = abs(op.displacement)
    if delta == 0.0:
        raise ZeroDisplacementError("operation has zero displacement")
    v_min = {
        OperationKind.HOIST: limits.hoist_vel_min,
        OperationKind.TROLLEY: limits.trolley_vel_min,
        OperationKind.SLEW: limits.slew_vel_min,
    }[op.kind]
    return (DEFAULT_T_LO, multiplier * delta / v_min)


def _simpson(y: np.ndarray, dx: float) -> float:
    """Composite Simpson rule; y must have an odd number of samples."""
    n = y.size - 1
    if n % 2 != 0:
        raise ValueError("Simpson rule needs an even panel count")
    return float(dx / 3.0 * (y[0] + y[-1]
                             + 4.0 * np.sum(y[1:-1:2]) + 2.0 * np.sum(y[2:-1:2])))


def _peak(grid_ts, grid_vals, scalar_fn, refine_iters: int = 3) -> float:
    """Max |signal| from precomputed grid samples plus golden-section
    refinement in the bracket around the grid maximizer."""
    vals = np.abs(grid_vals)
    i = int(np.argmax(vals))
    a = grid_ts[max(i - 1, 0)]
    b = grid_ts[min(i + 1, grid_ts.size - 1)]
    best = float(vals[i])
    if b <= a:
        return best
    golden = 0.6180339887498949
    c = b - golden * (b - a)
    d = a + golden * (b - a)
    fc = abs(float(scalar_fn(c)))
    fd = abs(float(scalar_fn(d)))
    for _ in range(refine_iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - golden * (b - a)
            fc = abs(float(scalar_fn(c)))
        else:
            a, c, fc = c, d, fd
            d = a + golden * (b - a)
            fd = abs(float(scalar_fn(d)))
        best = max(best, fc, fd)
    return best


@dataclass
class DurationProblem:
    """One operation's bi-objective duration problem over [t_lo, t_hi].

    relaxed names constraints excluded from feasibility (their entries are
    kept in the report, flagged non-operative); the planner uses this when an
    operation's geometry makes a swing bound unsatisfiable at any duration.
    """

    op: OperationSpec
    limits: CraneLimits
    t_lo: float
    t_hi: float
    grid: int = 1001
    relaxed: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not 0.0 < self.t_lo < self.t_hi:
            raise ParameterError("need 0 < t_lo < t_hi")
        if self.grid % 2 == 0:
            raise ParameterError("grid size must be odd (Simpson panels)")

    # -- public API ---------------------------------------------------------

    def evaluate(self, duration: float) -> tuple[Objectives, ConstraintReport]:
        kind = self.op.kind
        if kind is OperationKind.HOIST:
            return self._evaluate_hoist(duration)
        if kind is OperationKind.TROLLEY:
            return self._evaluate_trolley(duration)
        return self._evaluate_slew(duration)

    def violation(self, duration: float) -> float:
        return self.evaluate(duration)[1].total_violation

    def min_feasible_duration(self, rtol: float = 1e-10):
        """Smallest feasible duration in [t_lo, t_hi] by bisection, or None.

        Relies on the attained constraint maxima being non-increasing in the
        duration (profiles scale as T^-k).
        """
        if self.violation(self.t_hi) > 0.0:
            return None
        lo, hi = self.t_lo, self.t_hi
        if self.violation(lo) == 0.0:
            return lo
        while (hi - lo) > rtol * hi:
            mid = 0.5 * (lo + hi)
            if self.violation(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        return hi

    # -- evaluators ---------------------------------------------------------

    def _mark(self, name: str) -> bool:
        return name not in self.relaxed

    def _evaluate_hoist(self, T: float):
        lm = self.limits
        seg = hoist_profile(self.op.start, self.op.end, T)
        ts = np.linspace(0.0, T, self.grid)
        vel = seg.eval(ts, 1)
        acc = seg.eval(ts, 2)
        effort = _simpson(acc * acc, ts[1] - ts[0]) / lm.hoist_acc_max ** 2
        entries = (
            ConstraintEntry("hoist_velocity", lm.hoist_vel_max,
                            _peak(ts, vel, lambda t: seg.eval(t, 1)),
                            self._mark("hoist_velocity")),
            ConstraintEntry("hoist_acceleration", lm.hoist_acc_max,
                            _peak(ts, acc, lambda t: seg.eval(t, 2)),
                            self._mark("hoist_acceleration")),
        )
        return Objectives(T, effort), ConstraintReport(entries)

    def _evaluate_trolley(self, T: float):
        lm = self.limits
        g = lm.g
        D_H = self.op.fixed_hoist
        k = D_H / g
        seg = flat_profile_11(self.op.start, self.op.end, T)
        ts = np.linspace(0.0, T, self.grid)
        state = trolley_from_flat(jet(seg, ts), D_H, g)

        def vel_at(t):
            return seg.eval(t, 1) + k * seg.eval(t, 3)

        def acc_at(t):
            return seg.eval(t, 2) + k * seg.eval(t, 4)

        effort = _simpson(state.d_T_ddot ** 2, ts[1] - ts[0]) / lm.trolley_acc_max ** 2
        swing_peak = _peak(ts, seg.eval(ts, 2), lambda t: seg.eval(t, 2))
        flat4_peak = _peak(ts, seg.eval(ts, 4), lambda t: seg.eval(t, 4))
        entries = (
            ConstraintEntry("trolley_velocity", lm.trolley_vel_max,
                            _peak(ts, state.d_T_dot, vel_at),
                            self._mark("trolley_velocity")),
            ConstraintEntry("trolley_acceleration", lm.trolley_acc_max,
                            _peak(ts, state.d_T_ddot, acc_at),
                            self._mark("trolley_acceleration")),
            # |d_L''| <= g*alpha_max is exactly max|alpha| <= alpha_max
            ConstraintEntry("swing_alpha", g * lm.alpha_max, swing_peak,
                            self._mark("swing_alpha")),
            # Relaxed textbook bound on the 4th flat derivative; negative
            # limit for standard crane limits, diagnostic only.
            ConstraintEntry("flat_d4_relaxed",
                            (g / D_H) * (lm.trolley_acc_max - g * lm.alpha_max),
                            flat4_peak, operative=False),
        )
        return Objectives(T, effort), ConstraintReport(entries)

    def _evaluate_slew(self, T: float):
        lm = self.limits
        g = lm.g
        D_H = self.op.fixed_hoist
        D_T = self.op.fixed_trolley
        x_i, y_i, x_f, y_f = slew_flat_boundaries(self.op.start, self.op.end, D_T)
        seg_x = flat_profile_11(x_i, x_f, T)
        seg_y = flat_profile_11(y_i, y_f, T)
        ts = np.linspace(0.0, T, self.grid)
        jx, jy = jet(seg_x, ts), jet(seg_y, ts)
        state = slew_from_flat(jx, jy, D_T, D_H, g)
        effort = _simpson(state.theta_ddot ** 2, ts[1] - ts[0]) / lm.slew_acc_max ** 2

        k = D_H / g
        vmax2 = lm.slew_vel_max ** 2

        def image_at(t):
            return (seg_x.eval(t, 0) + k * seg_x.eval(t, 2),
                    seg_y.eval(t, 0) + k * seg_y.eval(t, 2),
                    seg_x.eval(t, 1) + k * seg_x.eval(t, 3),
                    seg_y.eval(t, 1) + k * seg_y.eval(t, 3),
                    seg_x.eval(t, 2) + k * seg_x.eval(t, 4),
                    seg_y.eval(t, 2) + k * seg_y.eval(t, 4))

        def vel_at(t):
            x_T, y_T, xd_T, yd_T, _, _ = image_at(t)
            return -xd_T / y_T if abs(y_T) >= abs(x_T) else yd_T / x_T

        def acc_at(t):
            x_T, y_T, xd_T, yd_T, xdd_T, ydd_T = image_at(t)
            if abs(y_T) >= abs(x_T):
                td = -xd_T / y_T
                return -(x_T * td * td + xdd_T) / y_T
            td = yd_T / x_T
            return (y_T * td * td + ydd_T) / x_T

        # Composite acceleration bound: the quotient form of theta_ddot with
        # the velocity limit substituted for theta_dot^2, evaluated on the
        # same larger-denominator branch as the state map.
        def composite_at(t):
            x_T, y_T, _, _, xdd_T, ydd_T = image_at(t)
            if abs(y_T) >= abs(x_T):
                return abs(x_T * vmax2 + xdd_T) / abs(y_T)
            return abs(y_T * vmax2 + ydd_T) / abs(x_T)

        # Radial swing, exact form: |x^2+y^2+(D_H/g)(x x''+y y'') - D_T^2|
        # <= D_H*D_T*alpha_max  (equivalent to max|alpha| <= alpha_max).
        def radial_at(t):
            x, y = seg_x.eval(t, 0), seg_y.eval(t, 0)
            xdd, ydd = seg_x.eval(t, 2), seg_y.eval(t, 2)
            return x * x + y * y + k * (x * xdd + y * ydd) - D_T * D_T

        def tangential_at(t):
            return (seg_y.eval(t, 0) * seg_x.eval(t, 2)
                    - seg_x.eval(t, 0) * seg_y.eval(t, 2))

        x_T_g = jx[0] + k * jx[2]
        y_T_g = jy[0] + k * jy[2]
        xdd_T_g = jx[2] + k * jx[4]
        ydd_T_g = jy[2] + k * jy[4]
        use_x = np.abs(y_T_g) >= np.abs(x_T_g)
        comp_grid = np.where(
            use_x,
            np.abs(x_T_g * vmax2 + xdd_T_g) / np.abs(np.where(y_T_g == 0, 1.0, y_T_g)),
            np.abs(y_T_g * vmax2 + ydd_T_g) / np.abs(np.where(x_T_g == 0, 1.0, x_T_g)))
        radial_grid = (jx[0] ** 2 + jy[0] ** 2
                       + k * (jx[0] * jx[2] + jy[0] * jy[2]) - D_T ** 2)
        tang_grid = jy[0] * jx[2] - jx[0] * jy[2]

        entries = (
            ConstraintEntry("slew_velocity", lm.slew_vel_max,
                            _peak(ts, state.theta_dot, vel_at),
                            self._mark("slew_velocity")),
            ConstraintEntry("slew_acceleration_composite", lm.slew_acc_max,
                            _peak(ts, comp_grid, composite_at),
                            self._mark("slew_acceleration_composite")),
            ConstraintEntry("swing_alpha", D_H * D_T * lm.alpha_max,
                            _peak(ts, radial_grid, radial_at),
                            self._mark("swing_alpha")),
            ConstraintEntry("swing_beta", g * D_T * lm.beta_max,
                            _peak(ts, tang_grid, tangential_at),
                            self._mark("swing_beta")),
            # Diagnostics: direct acceleration peak and the relaxed textbook
            # radial bound (negative for crane-scale D_T > D_H*alpha_max).
            ConstraintEntry("slew_acceleration_direct", lm.slew_acc_max,
                            _peak(ts, state.theta_ddot, acc_at),
                            operative=False),
            ConstraintEntry("swing_alpha_relaxed",
                            D_T * (D_H * lm.alpha_max - D_T),
                            _peak(ts, np.abs(radial_grid + D_T ** 2),
                                  lambda t: radial_at(t) + D_T * D_T),
                            operative=False),
        )
        return Objectives(T, effort), ConstraintReport(entries)
