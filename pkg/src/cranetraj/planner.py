"""Lifting-path parsing, per-operation planning, and plan assembly.

A decoupled lifting path is an ordered list of crane configurations
(slew angle, trolley position, hoist length) where exactly one coordinate
changes between consecutive waypoints. Each segment becomes one operation,
planned independently: build its duration problem, solve it with the chosen
evolutionary optimizer, pick one solution by fuzzy membership, materialize
the trajectory segments. Time instants are the cumulative durations.

Infeasible decision windows are escalated deterministically before the solver
runs: the window is doubled (a few times) while the worst-case violation
improves; constraints whose violation does not respond to more time are
structural (duration-independent geometry, e.g. the radial-swing amplitude of
a wide slew whose payload chord sags far inside the trolley circle) and are
relaxed to diagnostics, keeping the widened window. Only when violations keep
improving but never reach zero within the cap is the operation reported
infeasible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flatness import jet, slew_flat_boundaries, slew_from_flat, trolley_from_flat
from .metrics import fuzzy_select
from .model import CraneLimits, OperationKind, OperationSpec
from .moea import RUNNERS, AlgoConfig, ParetoSet
from .poly import flat_profile_11, hoist_profile
from .problems import ConstraintReport, DurationProblem, Objectives, decision_bounds


class MalformedPathError(ValueError):
    """Waypoint pair changes zero or more than one coordinate."""


class InfeasibleOperationError(RuntimeError):
    """No feasible duration exists for an operation; carries diagnostics."""

    def __init__(self, message: str, report: ConstraintReport | None = None,
                 operation_index: int | None = None):
        super().__init__(message)
        self.report = report
        self.operation_index = operation_index


@dataclass(frozen=True)
class LiftPath:
    """Waypoints (theta_S rad, d_T m, d_H m) and the derived operations."""

    waypoints: tuple
    operations: tuple

    def __len__(self):
        return len(self.operations)


def parse_path(waypoints) -> LiftPath:
    """Classify consecutive waypoint pairs into operations.

    Exactly one coordinate may change per pair; the unchanged hoist length
    (and trolley radius, for slews) become the operation's fixed parameters.
    """
    pts = [tuple(float(c) for c in w) for w in waypoints]
    if len(pts) < 2:
        raise MalformedPathError("need at least two waypoints")
    if any(len(p) != 3 for p in pts):
        raise MalformedPathError("waypoints must be (slew, trolley, hoist) triples")
    ops = []
    for k in range(1, len(pts)):
        (th0, dt0, dh0), (th1, dt1, dh1) = pts[k - 1], pts[k]
        changed = [th0 != th1, dt0 != dt1, dh0 != dh1]
        if sum(changed) == 0:
            raise MalformedPathError(f"waypoints {k - 1} and {k} are identical")
        if sum(changed) > 1:
            raise MalformedPathError(
                f"waypoints {k - 1} and {k} change more than one coordinate")
        if changed[0]:
            ops.append(OperationSpec(OperationKind.SLEW, th0, th1,
                                     fixed_hoist=dh0, fixed_trolley=dt0))
        elif changed[1]:
            ops.append(OperationSpec(OperationKind.TROLLEY, dt0, dt1,
                                     fixed_hoist=dh0))
        else:
            ops.append(OperationSpec(OperationKind.HOIST, dh0, dh1))
    return LiftPath(tuple(pts), tuple(ops))


@dataclass
class PlannedOperation:
    spec: OperationSpec
    duration: float
    objectives: Objectives
    mu_bar: float
    pareto: ParetoSet
    segments: dict
    bounds: tuple
    relaxed: tuple = ()

    @property
    def kind(self) -> OperationKind:
        return self.spec.kind


def _escalate_bounds(spec, limits, t_lo, t_hi, max_doublings=3,
                     stagnation_rtol=0.01):
    """Deterministic feasibility ladder; returns (t_hi, relaxed_names) or
    raises InfeasibleOperationError."""

    def report_at(hi, relaxed):
        prob = DurationProblem(spec, limits, t_lo, hi, relaxed=frozenset(relaxed))
        return prob.evaluate(hi)[1]

    relaxed: tuple = ()
    report = report_at(t_hi, relaxed)
    doublings = 0
    while not report.feasible:
        if doublings >= max_doublings:
            raise InfeasibleOperationError(
                f"no feasible duration up to {t_hi:.3f} s "
                f"(worst violation {report.total_violation:.3e})", report)
        wider = report_at(2.0 * t_hi, relaxed)
        if wider.feasible:
            return 2.0 * t_hi, relaxed
        stagnant = []
        for entry in wider.entries:
            if not entry.operative or entry.violation == 0.0:
                continue
            before = report.entry(entry.name).violation
            if before > 0.0 and (before - entry.violation) <= stagnation_rtol * before:
                stagnant.append(entry.name)
        t_hi *= 2.0
        doublings += 1
        if stagnant:
            relaxed = relaxed + tuple(stagnant)
        report = report_at(t_hi, relaxed)
    return t_hi, relaxed


def plan_operation(spec: OperationSpec, limits: CraneLimits, cfg: AlgoConfig,
                   algorithm: str = "gde3", bounds_multiplier: float = 1.0,
                   max_doublings: int = 3) -> PlannedOperation:
    """Plan one operation: optimize its duration, fuzzy-select, materialize
    the trajectory segments."""
    if algorithm not in RUNNERS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    t_lo, t_hi = decision_bounds(spec, limits, bounds_multiplier)
    t_hi, relaxed = _escalate_bounds(spec, limits, t_lo, t_hi, max_doublings)
    problem = DurationProblem(spec, limits, t_lo, t_hi, relaxed=frozenset(relaxed))
    pareto = RUNNERS[algorithm](problem, cfg)
    if not pareto.members:
        best = pareto.min_violation_member
        report = problem.evaluate(best.x)[1] if best is not None else None
        raise InfeasibleOperationError(
            "optimizer found no feasible duration", report)
    chosen, mu_bar = fuzzy_select(pareto)
    duration = chosen.x
    if spec.kind is OperationKind.HOIST:
        segments = {"hoist": hoist_profile(spec.start, spec.end, duration)}
    elif spec.kind is OperationKind.TROLLEY:
        segments = {"flat": flat_profile_11(spec.start, spec.end, duration)}
    else:
        x_i, y_i, x_f, y_f = slew_flat_boundaries(spec.start, spec.end,
                                                  spec.fixed_trolley)
        segments = {
            "flat_x": flat_profile_11(x_i, x_f, duration),
            "flat_y": flat_profile_11(y_i, y_f, duration),
        }
    return PlannedOperation(
        spec=spec,
        duration=duration,
        objectives=Objectives(chosen.f1, chosen.f2),
        mu_bar=mu_bar,
        pareto=pareto,
        segments=segments,
        bounds=(t_lo, t_hi),
        relaxed=relaxed,
    )


@dataclass
class LiftPlan:
    path: LiftPath
    limits: CraneLimits
    operations: list            # PlannedOperation, in path order
    time_instants: list         # t_0 = 0 .. t_n, cumulative
    planning_time: float        # max per-operation solver runtime, s

    @property
    def total_time(self) -> float:
        return self.time_instants[-1]


def plan_lift(path: LiftPath, limits: CraneLimits, cfg: AlgoConfig,
              algorithm: str = "gde3", bounds_multiplier: float = 1.0) -> LiftPlan:
    """Plan every operation of the path (independently; per-operation seeds
    derive from the master seed plus the operation index) and accumulate the
    waypoint time instants."""
    if not path.operations:
        raise MalformedPathError("path contains no operations")
    planned = []
    for idx, spec in enumerate(path.operations):
        try:
            planned.append(plan_operation(
                spec, limits, cfg.with_seed(cfg.seed + idx), algorithm,
                bounds_multiplier))
        except InfeasibleOperationError as err:
            err.operation_index = idx
            raise
    instants = [0.0]
    for op in planned:
        instants.append(instants[-1] + op.duration)
    t_plan = max(op.pareto.provenance.runtime for op in planned)
    return LiftPlan(path, limits, planned, instants, t_plan)


SAMPLE_COLUMNS = (
    "t", "theta_S", "theta_S_dot", "theta_S_ddot",
    "d_T", "d_T_dot", "d_T_ddot",
    "d_H", "d_H_dot", "d_H_ddot",
    "alpha", "alpha_dot", "beta", "beta_dot",
)


def sample_plan(plan: LiftPlan, dt: float = 0.01) -> dict:
    """Sample the full crane state along the plan.

    Returns a dict of equally named column arrays (SAMPLE_COLUMNS). The grid
    is the uniform dt grid united with the exact operation switching
    instants, so waypoint rows are present exactly. During an operation the
    active DOF follows its planned segment and the others hold their waypoint
    values; swing columns come from the flatness maps (zero during hoists).
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    instants = np.asarray(plan.time_instants)
    total = float(instants[-1])
    grid = np.arange(0.0, total, dt)
    times = np.unique(np.concatenate([grid, instants]))
    cols = {name: np.zeros_like(times) for name in SAMPLE_COLUMNS}
    cols["t"] = times

    # operation index active at each sample; boundary instants belong to the
    # earlier operation (values coincide across the switch by construction)
    op_idx = np.clip(np.searchsorted(instants, times, side="left") - 1,
                     0, len(plan.operations) - 1)
    g = plan.limits.g
    for k, op in enumerate(plan.operations):
        mask = op_idx == k
        if not np.any(mask):
            continue
        local = times[mask] - instants[k]
        local = np.clip(local, 0.0, op.duration)
        theta0, d_T0, d_H0 = plan.path.waypoints[k]
        if op.kind is OperationKind.HOIST:
            seg = op.segments["hoist"]
            cols["d_H"][mask] = seg.eval(local, 0)
            cols["d_H_dot"][mask] = seg.eval(local, 1)
            cols["d_H_ddot"][mask] = seg.eval(local, 2)
            cols["theta_S"][mask] = theta0
            cols["d_T"][mask] = d_T0
        elif op.kind is OperationKind.TROLLEY:
            seg = op.segments["flat"]
            state = trolley_from_flat(jet(seg, local), op.spec.fixed_hoist, g)
            cols["d_T"][mask] = state.d_T
            cols["d_T_dot"][mask] = state.d_T_dot
            cols["d_T_ddot"][mask] = state.d_T_ddot
            cols["alpha"][mask] = state.alpha
            cols["alpha_dot"][mask] = state.alpha_dot
            cols["theta_S"][mask] = theta0
            cols["d_H"][mask] = d_H0
        else:
            state = slew_from_flat(jet(op.segments["flat_x"], local),
                                   jet(op.segments["flat_y"], local),
                                   op.spec.fixed_trolley, op.spec.fixed_hoist, g)
            cols["theta_S"][mask] = state.theta
            cols["theta_S_dot"][mask] = state.theta_dot
            cols["theta_S_ddot"][mask] = state.theta_ddot
            cols["alpha"][mask] = state.alpha
            cols["alpha_dot"][mask] = state.alpha_dot
            cols["beta"][mask] = state.beta
            cols["beta_dot"][mask] = state.beta_dot
            cols["d_T"][mask] = d_T0
            cols["d_H"][mask] = d_H0
    return cols
