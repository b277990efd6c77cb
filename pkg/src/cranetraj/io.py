"""File formats: limits JSON, path CSV, plan JSON, trajectory/front/sim CSV.

Angles are degrees in all files (matching crane data sheets and making the
CSVs plot-ready) and radians everywhere inside the library; the conversion
happens exactly once, here. Trajectory CSVs carry the SI columns (radians)
plus a parallel ``*_deg`` column set for the angular quantities.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict
from datetime import datetime, timezone
from importlib import resources

import numpy as np

from .model import CraneLimits, OperationKind
from .planner import LiftPlan, SAMPLE_COLUMNS, parse_path

PATH_HEADER = ("slew_deg", "trolley_m", "hoist_m")
_DEG_COLUMNS = {
    "theta_S": "theta_S_deg",
    "theta_S_dot": "theta_S_dot_degps",
    "theta_S_ddot": "theta_S_ddot_degps2",
    "alpha": "alpha_deg",
    "alpha_dot": "alpha_dot_degps",
    "beta": "beta_deg",
    "beta_dot": "beta_dot_degps",
}


class InputFormatError(ValueError):
    """A data file does not match its documented format."""


def load_limits(path) -> CraneLimits:
    try:
        return CraneLimits.from_json(path)
    except (json.JSONDecodeError, ValueError) as err:
        raise InputFormatError(f"bad limits file {path}: {err}") from err


def load_path_csv(path):
    """Read a lifting path CSV (header slew_deg,trolley_m,hoist_m) into a
    parsed LiftPath (angles converted to radians)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh)
                if r and not r[0].lstrip().startswith("#")]
    if not rows or tuple(h.strip() for h in rows[0]) != PATH_HEADER:
        raise InputFormatError(
            f"path file must start with header {','.join(PATH_HEADER)}")
    waypoints = []
    for r in rows[1:]:
        if len(r) != 3:
            raise InputFormatError(f"path row {r!r} needs exactly 3 columns")
        try:
            slew_deg, trolley, hoist = (float(v) for v in r)
        except ValueError as err:
            raise InputFormatError(f"non-numeric path row {r!r}") from err
        waypoints.append((math.radians(slew_deg), trolley, hoist))
    return parse_path(waypoints)


def _timestamp_lines(include: bool):
    if not include:
        return []
    return [f"# generated {datetime.now(timezone.utc).isoformat()}"]


def write_csv(path, header, rows, timestamp: bool = True) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in _timestamp_lines(timestamp):
            fh.write(line + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def write_trajectory_csv(path, cols: dict, timestamp: bool = True) -> None:
    header = list(SAMPLE_COLUMNS) + [_DEG_COLUMNS[c] for c in _DEG_COLUMNS]
    n = cols["t"].size
    rows = []
    for i in range(n):
        row = [_fmt(cols[c][i]) for c in SAMPLE_COLUMNS]
        row += [_fmt(math.degrees(cols[c][i])) for c in _DEG_COLUMNS]
        rows.append(row)
    write_csv(path, header, rows, timestamp)


def plan_to_dict(plan: LiftPlan, algorithm: str, seed: int,
                 bounds_multiplier: float, timestamp: bool = True) -> dict:
    ops = []
    for idx, op in enumerate(plan.operations):
        kind = op.spec.kind
        angular = kind is OperationKind.SLEW
        conv = math.degrees if angular else (lambda v: v)
        ops.append({
            "index": idx + 1,
            "kind": kind.value,
            "start": conv(op.spec.start),
            "end": conv(op.spec.end),
            "units": "deg" if angular else "m",
            "fixed_hoist_m": op.spec.fixed_hoist,
            "fixed_trolley_m": op.spec.fixed_trolley,
            "duration_s": op.duration,
            "effort": op.objectives.effort,
            "mu_bar": op.mu_bar,
            "bounds_s": list(op.bounds),
            "relaxed_constraints": list(op.relaxed),
            "front_size": len(op.pareto),
            "solver_runtime_s": op.pareto.provenance.runtime,
            "evaluations": op.pareto.provenance.evaluations,
        })
    doc = {
        "algorithm": algorithm,
        "seed": seed,
        "bounds_multiplier": bounds_multiplier,
        "limits": plan.limits.to_dict(),
        "total_time_s": plan.total_time,
        "planning_time_s": plan.planning_time,
        "time_instants_s": list(plan.time_instants),
        "operations": ops,
    }
    if timestamp:
        doc["generated"] = datetime.now(timezone.utc).isoformat()
    return doc


def plan_schema() -> dict:
    with resources.files("cranetraj.schemas").joinpath("plan.schema.json").open(
            "r", encoding="utf-8") as fh:
        return json.load(fh)


def validate_plan_dict(doc: dict) -> None:
    import jsonschema

    jsonschema.validate(doc, plan_schema())


def write_plan_json(path, plan: LiftPlan, algorithm: str, seed: int,
                    bounds_multiplier: float, timestamp: bool = True) -> None:
    doc = plan_to_dict(plan, algorithm, seed, bounds_multiplier, timestamp)
    validate_plan_dict(doc)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_front_csv(path, pareto, chosen_x=None, timestamp: bool = True) -> None:
    """Front rows sorted ascending by f1; the fuzzy-selected row is flagged."""
    header = ("duration_s", "f1_s", "f2", "violation", "selected")
    rows = []
    for m in sorted(pareto.members, key=lambda m: m.f1):
        rows.append((_fmt(m.x), _fmt(m.f1), _fmt(m.f2), _fmt(m.violation),
                     int(chosen_x is not None and m.x == chosen_x)))
    if not pareto.members and pareto.min_violation_member is not None:
        m = pareto.min_violation_member
        rows.append((_fmt(m.x), _fmt(m.f1), _fmt(m.f2), _fmt(m.violation), 0))
    write_csv(path, header, rows, timestamp)


def write_sim_csv(path, per_op_results, timestamp: bool = True) -> None:
    """Concatenated per-operation simulated swing, with global time."""
    header = ("t", "operation", "alpha_sim", "alpha_dot_sim",
              "beta_sim", "beta_dot_sim",
              "alpha_sim_deg", "beta_sim_deg")
    rows = []
    for op_index, t_offset, res in per_op_results:
        for i in range(res.times.size):
            a, ad, b, bd = res.states[i]
            rows.append((_fmt(t_offset + res.times[i]), op_index,
                         _fmt(a), _fmt(ad), _fmt(b), _fmt(bd),
                         _fmt(math.degrees(a)), _fmt(math.degrees(b))))
    write_csv(path, header, rows, timestamp)
