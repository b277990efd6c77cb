"""Command-line planner: plan, pareto, compare-moea, simulate subcommands.

Exit codes: 0 success, 2 infeasible operation, 3 malformed input,
4 internal numeric error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import io
from .flatness import DegenerateConfigurationError, InconsistentJetError
from .metrics import fuzzy_select, hyperarea, spacing
from .model import CraneLimits, OperationKind, OperationSpec, ParameterError, \
    SwingDomainError
from .moea import RUNNERS, AlgoConfig
from .planner import InfeasibleOperationError, MalformedPathError, \
    plan_lift, plan_operation, sample_plan
from .problems import DurationProblem, ZeroDisplacementError, decision_bounds
from .simulate import simulate_slew, simulate_trolley

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_MALFORMED = 3
EXIT_NUMERIC = 4


def _add_common(parser):
    parser.add_argument("--limits", help="limits JSON (defaults to built-ins)")
    parser.add_argument("--algo", choices=sorted(RUNNERS), default="gde3")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--pop", type=int, default=100)
    parser.add_argument("--max-evals", type=int, default=5000)
    parser.add_argument("--bounds-multiplier", type=float, default=1.0)
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit timestamp lines for byte-stable outputs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cranetraj",
        description="Time-energy optimal anti-swing trajectory planner "
                    "for tower crane lifting paths.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="plan a full lifting path")
    _add_common(p_plan)
    p_plan.add_argument("--path", required=True, help="lifting path CSV")
    p_plan.add_argument("--dt", type=float, default=0.01,
                        help="trajectory sampling step, s")

    p_front = sub.add_parser("pareto", help="export one operation's front")
    _add_common(p_front)
    p_front.add_argument("--path", help="lifting path CSV")
    p_front.add_argument("--op-index", type=int, default=1,
                         help="1-based operation index within the path")
    p_front.add_argument("--inline",
                         help="inline operation kind,start,end[,D_H[,D_T]] "
                              "(slew angles in degrees), e.g. slew,50,80,5,2.5")

    p_cmp = sub.add_parser("compare-moea",
                           help="compare NSGA-II and GDE3 on the path operations")
    _add_common(p_cmp)
    p_cmp.add_argument("--path", required=True, help="lifting path CSV")
    p_cmp.add_argument("--repeats", type=int, default=10)

    p_sim = sub.add_parser("simulate",
                           help="plan and verify by swing-ODE simulation")
    _add_common(p_sim)
    p_sim.add_argument("--path", required=True, help="lifting path CSV")
    p_sim.add_argument("--model", choices=("simplified", "full"),
                       default="simplified")
    p_sim.add_argument("--dt", type=float, default=1e-3,
                       help="integration step, s")
    return parser


def _load_limits(args) -> CraneLimits:
    return io.load_limits(args.limits) if args.limits else CraneLimits()


def _config(args) -> AlgoConfig:
    return AlgoConfig(population=args.pop, max_evaluations=args.max_evals,
                      seed=args.seed)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _parse_inline(text: str) -> OperationSpec:
    parts = [p.strip() for p in text.split(",")]
    try:
        kind = OperationKind(parts[0].lower())
        values = [float(p) for p in parts[1:]]
    except (ValueError, IndexError) as err:
        raise io.InputFormatError(f"bad inline operation {text!r}") from err
    if kind is OperationKind.HOIST and len(values) == 2:
        return OperationSpec(kind, values[0], values[1])
    if kind is OperationKind.TROLLEY and len(values) == 3:
        return OperationSpec(kind, values[0], values[1], fixed_hoist=values[2])
    if kind is OperationKind.SLEW and len(values) == 4:
        return OperationSpec(kind, math.radians(values[0]),
                             math.radians(values[1]),
                             fixed_hoist=values[2], fixed_trolley=values[3])
    raise io.InputFormatError(
        f"inline {kind.value} operation needs "
        f"{'start,end' if kind is OperationKind.HOIST else 'start,end,D_H' if kind is OperationKind.TROLLEY else 'start_deg,end_deg,D_H,D_T'}")


def cmd_plan(args) -> int:
    limits = _load_limits(args)
    path = io.load_path_csv(args.path)
    plan = plan_lift(path, limits, _config(args), args.algo,
                     args.bounds_multiplier)
    out = _outdir(args)
    io.write_plan_json(out / "plan.json", plan, args.algo, args.seed,
                       args.bounds_multiplier, timestamp=not args.no_timestamp)
    cols = sample_plan(plan, args.dt)
    io.write_trajectory_csv(out / "trajectory.csv", cols,
                            timestamp=not args.no_timestamp)
    print(f"planned {len(plan.operations)} operations, "
          f"total {plan.total_time:.2f} s -> {out / 'plan.json'}")
    return EXIT_OK


def cmd_pareto(args) -> int:
    limits = _load_limits(args)
    if args.inline:
        spec = _parse_inline(args.inline)
    else:
        if not args.path:
            raise io.InputFormatError("pareto needs --path or --inline")
        ops = io.load_path_csv(args.path).operations
        if not 1 <= args.op_index <= len(ops):
            raise io.InputFormatError(
                f"--op-index {args.op_index} outside 1..{len(ops)}")
        spec = ops[args.op_index - 1]
    out = _outdir(args)
    t_lo, t_hi = decision_bounds(spec, limits, args.bounds_multiplier)
    problem = DurationProblem(spec, limits, t_lo, t_hi)
    pareto = RUNNERS[args.algo](problem, _config(args))
    chosen_x = None
    if pareto.members:
        chosen, _ = fuzzy_select(pareto)
        chosen_x = chosen.x
    io.write_front_csv(out / "front.csv", pareto, chosen_x,
                       timestamp=not args.no_timestamp)
    print(f"{len(pareto.members)} feasible front members -> {out / 'front.csv'}")
    return EXIT_OK


def cmd_compare_moea(args) -> int:
    if args.repeats < 1:
        raise io.InputFormatError("--repeats must be >= 1")
    limits = _load_limits(args)
    ops = io.load_path_csv(args.path).operations
    out = _outdir(args)
    report: dict = {"repeats": args.repeats, "operations": []}
    csv_rows = []
    for idx, spec in enumerate(ops, start=1):
        t_lo, t_hi = decision_bounds(spec, limits, args.bounds_multiplier)
        problem = DurationProblem(spec, limits, t_lo, t_hi)
        stats = {a: {"runtime": [], "spacing": [], "hyperarea": []}
                 for a in RUNNERS}
        for rep in range(args.repeats):
            cfg = _config(args).with_seed(args.seed + rep)
            fronts = {a: RUNNERS[a](problem, cfg) for a in RUNNERS}
            pts = [m.objectives for front in fronts.values()
                   for m in front.members]
            f1s, f2s = zip(*pts)
            ideal = (min(f1s), min(f2s))
            nadir = (max(f1s), max(f2s))
            for algo, front in fronts.items():
                stats[algo]["runtime"].append(front.provenance.runtime)
                stats[algo]["spacing"].append(spacing(front))
                stats[algo]["hyperarea"].append(
                    hyperarea(front, (1.0, 1.0), ideal, nadir))
        entry = {"index": idx, "kind": spec.kind.value, "metrics": {}}
        for algo in RUNNERS:
            entry["metrics"][algo] = {
                name: float(np.mean(vals)) for name, vals in stats[algo].items()}
        m_n, m_g = entry["metrics"]["nsga2"], entry["metrics"]["gde3"]
        entry["deltas_pct"] = {
            "runtime": 100.0 * (m_g["runtime"] - m_n["runtime"])
            / max(m_g["runtime"], 1e-12),
            "spacing": 100.0 * (m_n["spacing"] - m_g["spacing"])
            / max(m_n["spacing"], 1e-12),
            "hyperarea": 100.0 * (m_g["hyperarea"] - m_n["hyperarea"])
            / max(m_n["hyperarea"], 1e-12),
        }
        report["operations"].append(entry)
        for algo in RUNNERS:
            m = entry["metrics"][algo]
            csv_rows.append((idx, spec.kind.value, algo,
                             io._fmt(m["runtime"]), io._fmt(m["spacing"]),
                             io._fmt(m["hyperarea"])))
    with open(out / "moea_metrics.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    io.write_csv(out / "moea_metrics.csv",
                 ("operation", "kind", "algorithm", "runtime_s_mean",
                  "spacing_mean", "hyperarea_mean"),
                 csv_rows, timestamp=not args.no_timestamp)
    print(f"metrics for {len(ops)} operations x {args.repeats} repeats "
          f"-> {out / 'moea_metrics.json'}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    limits = _load_limits(args)
    path = io.load_path_csv(args.path)
    plan = plan_lift(path, limits, _config(args), args.algo,
                     args.bounds_multiplier)
    full = args.model == "full"
    out = _outdir(args)
    per_op = []
    summary = {"model": args.model, "dt_s": args.dt, "operations": []}
    for idx, op in enumerate(plan.operations):
        t0 = plan.time_instants[idx]
        if op.kind is OperationKind.TROLLEY:
            res = simulate_trolley(op, op.spec.fixed_hoist, limits.g,
                                   args.dt, full)
        elif op.kind is OperationKind.SLEW:
            res = simulate_slew(op, op.spec.fixed_trolley, op.spec.fixed_hoist,
                                limits.g, args.dt, full)
        else:
            res = None
        if res is None:
            entry = {"index": idx + 1, "kind": op.kind.value,
                     "max_abs_alpha_deg": 0.0, "max_abs_beta_deg": 0.0,
                     "residual": {"alpha": 0.0, "alpha_dot": 0.0,
                                  "beta": 0.0, "beta_dot": 0.0}}
        else:
            per_op.append((idx + 1, t0, res))
            residual = res.residual
            entry = {
                "index": idx + 1, "kind": op.kind.value,
                "max_abs_alpha_deg": math.degrees(res.max_abs_alpha),
                "max_abs_beta_deg": math.degrees(res.max_abs_beta),
                "residual": {
                    "alpha": residual.alpha, "alpha_dot": residual.alpha_dot,
                    "beta": residual.beta, "beta_dot": residual.beta_dot,
                },
            }
        summary["operations"].append(entry)
    io.write_sim_csv(out / "sim.csv", per_op, timestamp=not args.no_timestamp)
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    worst = max((e["max_abs_alpha_deg"] for e in summary["operations"]),
                default=0.0)
    print(f"simulated {len(plan.operations)} operations ({args.model}), "
          f"max |alpha| {worst:.3f} deg -> {out / 'summary.json'}")
    return EXIT_OK


_COMMANDS = {
    "plan": cmd_plan,
    "pareto": cmd_pareto,
    "compare-moea": cmd_compare_moea,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InfeasibleOperationError as err:
        where = "" if err.operation_index is None \
            else f" (operation {err.operation_index + 1})"
        print(f"infeasible operation{where}: {err}", file=sys.stderr)
        if err.report is not None:
            for e in err.report.entries:
                flag = "" if e.operative else " [diagnostic]"
                print(f"  {e.name}: attained {e.attained:.4g} vs limit "
                      f"{e.limit:.4g}{flag}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (io.InputFormatError, MalformedPathError, ZeroDisplacementError,
            ParameterError, FileNotFoundError, IsADirectoryError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_MALFORMED
    except (SwingDomainError, DegenerateConfigurationError,
            InconsistentJetError, FloatingPointError, ArithmeticError) as err:
        print(f"numeric error: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
