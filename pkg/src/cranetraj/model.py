"""Crane parameters, operation descriptions and payload swing dynamics.

Conventions: SI units throughout, angles in radians. Degrees appear only at
I/O boundaries (the limits JSON uses degree-suffixed keys for slew and swing
quantities, see :func:`CraneLimits.from_json`).

The swing right-hand sides model the payload as a spherical pendulum hanging
from the trolley. ``alpha`` is the radial swing angle (in the vertical plane
containing the jib), ``beta`` the tangential one (perpendicular to it). Both
must stay inside (-pi/2, pi/2) for the model to be meaningful.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum


class OperationKind(Enum):
    HOIST = "hoist"
    TROLLEY = "trolley"
    SLEW = "slew"


class ParameterError(ValueError):
    """A physical parameter is outside its valid domain."""


class SwingDomainError(ValueError):
    """Swing angles left the (-pi/2, pi/2) domain of the pendulum model."""


@dataclass(frozen=True)
class CraneLimits:
    """Mechanical and safety limits of the crane.

    Velocities/accelerations are magnitudes (strictly positive); the minimum
    velocities bound the decision space of the duration optimization, the
    maxima bound the trajectories themselves.
    """

    hoist_vel_min: float = 0.1          # m/s
    hoist_vel_max: float = 0.3          # m/s
    hoist_acc_max: float = 0.2          # m/s^2
    trolley_vel_min: float = 0.05       # m/s
    trolley_vel_max: float = 0.25       # m/s
    trolley_acc_max: float = 0.2        # m/s^2
    slew_vel_min: float = math.radians(3.0)    # rad/s
    slew_vel_max: float = math.radians(10.0)   # rad/s
    slew_acc_max: float = math.radians(10.0)   # rad/s^2
    alpha_max: float = math.radians(2.5)       # rad
    beta_max: float = math.radians(2.5)        # rad
    g: float = 9.8                      # m/s^2

    def __post_init__(self):
        for name in (
            "hoist_vel_min", "hoist_vel_max", "hoist_acc_max",
            "trolley_vel_min", "trolley_vel_max", "trolley_acc_max",
            "slew_vel_min", "slew_vel_max", "slew_acc_max",
            "alpha_max", "beta_max", "g",
        ):
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{name} must be strictly positive")
        for lo, hi in (
            ("hoist_vel_min", "hoist_vel_max"),
            ("trolley_vel_min", "trolley_vel_max"),
            ("slew_vel_min", "slew_vel_max"),
        ):
            if getattr(self, lo) >= getattr(self, hi):
                raise ParameterError(f"{lo} must be below {hi}")
        if self.alpha_max >= math.pi / 2 or self.beta_max >= math.pi / 2:
            raise ParameterError("swing limits must be below pi/2")

    # JSON keys mirror the usual crane data sheet naming; *_deg* keys are
    # converted to radians on load.
    _JSON_KEYS = {
        "hoist_vel_min_mps": ("hoist_vel_min", 1.0),
        "hoist_vel_max_mps": ("hoist_vel_max", 1.0),
        "hoist_acc_max_mps2": ("hoist_acc_max", 1.0),
        "trolley_vel_min_mps": ("trolley_vel_min", 1.0),
        "trolley_vel_max_mps": ("trolley_vel_max", 1.0),
        "trolley_acc_max_mps2": ("trolley_acc_max", 1.0),
        "slew_vel_min_degps": ("slew_vel_min", math.pi / 180.0),
        "slew_vel_max_degps": ("slew_vel_max", math.pi / 180.0),
        "slew_acc_max_degps2": ("slew_acc_max", math.pi / 180.0),
        "alpha_max_deg": ("alpha_max", math.pi / 180.0),
        "beta_max_deg": ("beta_max", math.pi / 180.0),
        "g_mps2": ("g", 1.0),
    }

    @classmethod
    def from_dict(cls, data: dict) -> "CraneLimits":
        unknown = set(data) - set(cls._JSON_KEYS)
        if unknown:
            raise ParameterError(f"unknown limit keys: {sorted(unknown)}")
        kwargs = {}
        for key, value in data.items():
            field, scale = cls._JSON_KEYS[key]
            kwargs[field] = float(value) * scale
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path) -> "CraneLimits":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        out = {}
        for key, (field, scale) in self._JSON_KEYS.items():
            out[key] = getattr(self, field) / scale
        return out

    def with_(self, **kwargs) -> "CraneLimits":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class OperationSpec:
    """One decoupled crane operation: exactly one DOF moves from start to end.

    Trolley and slew operations carry the hoist length ``fixed_hoist`` frozen
    during the motion; slew additionally carries the trolley radius
    ``fixed_trolley``.
    """

    kind: OperationKind
    start: float    # m (hoist/trolley) or rad (slew)
    end: float
    fixed_hoist: float | None = None    # D_H, m
    fixed_trolley: float | None = None  # D_T, m

    def __post_init__(self):
        if self.kind in (OperationKind.TROLLEY, OperationKind.SLEW):
            if self.fixed_hoist is None or self.fixed_hoist <= 0.0:
                raise ParameterError(f"{self.kind.value} operation needs fixed_hoist > 0")
        if self.kind is OperationKind.SLEW:
            if self.fixed_trolley is None or self.fixed_trolley <= 0.0:
                raise ParameterError("slew operation needs fixed_trolley > 0")

    @property
    def displacement(self) -> float:
        return self.end - self.start


@dataclass
class SwingState:
    alpha: float = 0.0       # rad
    alpha_dot: float = 0.0   # rad/s
    beta: float = 0.0        # rad
    beta_dot: float = 0.0    # rad/s

    def as_tuple(self):
        return (self.alpha, self.alpha_dot, self.beta, self.beta_dot)


def trolley_swing_rhs(state: SwingState, trolley_acc: float, D_H: float,
                      g: float = 9.8, full: bool = False):
    """Time derivative (alpha_dot, alpha_ddot) of the planar swing during a
    trolley move.

    The simplified form is the small-angle linear pendulum
    ``alpha_ddot = -(a_T + g*alpha)/D_H``; the full form keeps the
    trigonometric terms.
    """
    if D_H <= 0.0:
        raise ParameterError("D_H must be positive")
    a = state.alpha
    if full:
        if abs(a) >= math.pi / 2:
            raise SwingDomainError(f"|alpha| = {abs(a):.3f} rad >= pi/2")
        add = -(trolley_acc * math.cos(a) + g * math.sin(a)) / D_H
    else:
        add = -(trolley_acc + g * a) / D_H
    return (state.alpha_dot, add)


def slew_swing_rhs(state: SwingState, theta: float, theta_dot: float,
                   theta_ddot: float, D_T: float, D_H: float,
                   g: float = 9.8, full: bool = False):
    """Time derivative (alpha_dot, alpha_ddot, beta_dot, beta_ddot) of the
    spherical swing during a slew, with the jib motion as exogenous input.

    The full nonlinear equations are rearranged explicitly for the second
    derivatives; the rearrangement is diagonal (each equation contains only
    one of alpha_ddot, beta_ddot), singular only at |beta| = pi/2.
    """
    if D_T <= 0.0 or D_H <= 0.0:
        raise ParameterError("D_T and D_H must be positive")
    a, ad, b, bd = state.alpha, state.alpha_dot, state.beta, state.beta_dot
    td, tdd = theta_dot, theta_ddot
    if full:
        if abs(a) >= math.pi / 2 or abs(b) >= math.pi / 2:
            raise SwingDomainError("swing angle left (-pi/2, pi/2)")
        sa, ca = math.sin(a), math.cos(a)
        sb, cb = math.sin(b), math.cos(b)
        add = (
            D_H * tdd * sb * ca
            + 2.0 * D_H * ad * bd * sb
            + 2.0 * D_H * bd * td * cb * ca
            + D_H * td * td * cb * sa * ca
            + D_T * td * td * ca
            - g * sa
        ) / (D_H * cb)
        bdd = -(
            (D_T * cb + D_H * sa) * tdd
            + D_H * ad * ad * sb * cb
            - D_H * td * td * sb * cb * ca * ca
            + 2.0 * D_H * td * ad * cb * cb * ca
            + D_T * td * td * sa * sb
            + g * sb * ca
        ) / D_H
    else:
        add = (D_H * tdd * b + 2.0 * D_H * bd * td + D_H * td * td * a
               + D_T * td * td - g * a) / D_H
        bdd = -((D_T + D_H * a) * tdd - D_H * td * td * b
                + 2.0 * D_H * td * ad + g * b) / D_H
    return (ad, add, bd, bdd)
