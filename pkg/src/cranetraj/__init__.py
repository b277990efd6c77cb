"""Time-energy optimal anti-swing trajectory planner for tower cranes."""

from .model import CraneLimits, OperationKind, OperationSpec, SwingState
from .moea import AlgoConfig, ParetoSet, gde3_run, nsga2_run
from .planner import LiftPath, LiftPlan, PlannedOperation, parse_path, \
    plan_lift, plan_operation, sample_plan
from .problems import DurationProblem, Objectives, decision_bounds
from .simulate import SimResult, simulate_slew, simulate_trolley

__version__ = "0.1.0"

__all__ = [
    "AlgoConfig", "CraneLimits", "DurationProblem", "LiftPath", "LiftPlan",
    "Objectives", "OperationKind", "OperationSpec", "ParetoSet",
    "PlannedOperation", "SimResult", "SwingState", "decision_bounds",
    "gde3_run", "nsga2_run", "parse_path", "plan_lift", "plan_operation",
    "sample_plan", "simulate_slew", "simulate_trolley",
]
